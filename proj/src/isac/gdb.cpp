#include "isac/gdb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isac {

void GdbInstance::validate() const {
  const int m = antennas();
  if (m < 1 || weighting.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "GDB: B must be square");
  }
  const auto k = channels.size();
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "GDB: K must be >= 1");
  if (sinr_targets.size() != k || noise_powers.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GDB: gamma/sigma2 lengths must equal K");
  }
  for (const auto& h : channels) {
    if (h.size() != m) {
      throw Error(ErrorCode::kDimensionMismatch, "GDB: channel length != M");
    }
  }
  if ((weighting - weighting.adjoint()).norm() >
      1e-9 * (1.0 + weighting.norm())) {
    throw Error(ErrorCode::kInvalidInput, "GDB: B is not Hermitian");
  }
}

GdbInstance make_gdb_instance(const Scenario& scenario, CMatrix weighting) {
  GdbInstance inst{hermitian_part(weighting), scenario.channels,
                   scenario.sinr_targets, scenario.noise_powers};
  inst.validate();
  return inst;
}

CMatrix weighting_matrix(const RVector& lambda, const SensingOperator& op) {
  if (lambda.size() != op.grid_size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weighting_matrix: lambda length != Q");
  }
  const int m = op.antennas();
  CMatrix b = CMatrix::Identity(m, m);
  for (int q = 0; q < op.grid_size(); ++q) {
    if (lambda(q) != 0.0) b -= (2.0 * lambda(q)) * op.matrices[q];
  }
  return hermitian_part(b);
}

CMatrix c_matrix(const RVector& beta, const GdbInstance& inst) {
  if (beta.size() != inst.users()) {
    throw Error(ErrorCode::kDimensionMismatch, "c_matrix: beta length != K");
  }
  CMatrix c = inst.weighting;
  for (int j = 0; j < inst.users(); ++j) {
    const CVector& h = inst.channels[j];
    c += beta(j) * (h * h.adjoint());
  }
  return hermitian_part(c);
}

namespace {

// Quadratic forms h_k^H C^+ h_k, with a flag per channel for range membership.
struct QuadForms {
  RVector value;
  std::vector<bool> in_range;
};

QuadForms quad_forms(const CMatrix& c, const GdbInstance& inst, double tol) {
  const int k = inst.users();
  QuadForms out{RVector::Zero(k), std::vector<bool>(k, true)};

  Eigen::LLT<CMatrix> llt(c);
  if (llt.info() == Eigen::Success) {
    for (int i = 0; i < k; ++i) {
      const CVector x = llt.solve(inst.channels[i]);
      out.value(i) = inst.channels[i].dot(x).real();
    }
    if ((out.value.array() > 0.0).all() && out.value.allFinite()) return out;
  }

  // Rank-revealing fallback: minimum-norm solve through the eigenbasis.
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c);
  const RVector& ev = eig.eigenvalues();
  const CMatrix& u = eig.eigenvectors();
  const double threshold = tol * (1.0 + ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < k; ++i) {
    const CVector& h = inst.channels[i];
    const CVector coeff = u.adjoint() * h;
    double q = 0.0;
    double outside = 0.0;
    for (int j = 0; j < ev.size(); ++j) {
      const double w = std::norm(coeff(j));
      if (std::abs(ev(j)) > threshold) {
        q += w / ev(j);
      } else {
        outside += w;
      }
    }
    out.value(i) = q;
    out.in_range[i] = std::sqrt(outside) <= tol * h.norm();
  }
  return out;
}

double ratio(double gamma) { return gamma / (gamma + 1.0); }

}  // namespace

std::optional<RVector> interference_map(const RVector& beta,
                                        const GdbInstance& inst, double tol) {
  const auto forms = quad_forms(c_matrix(beta, inst), inst, tol);
  RVector out(inst.users());
  for (int i = 0; i < inst.users(); ++i) {
    const double q = forms.value(i);
    if (!forms.in_range[i] || !(q > 0.0) || !std::isfinite(q)) {
      return std::nullopt;
    }
    out(i) = ratio(inst.sinr_targets[i]) / q;
  }
  return out;
}

RVector interference_map_raw(const RVector& beta, const GdbInstance& inst,
                             double tol) {
  const auto forms = quad_forms(c_matrix(beta, inst), inst, tol);
  RVector out(inst.users());
  for (int i = 0; i < inst.users(); ++i) {
    const double q = forms.value(i);
    out(i) = (forms.in_range[i] && q != 0.0)
                 ? ratio(inst.sinr_targets[i]) / q
                 : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

bool check_f1(const RVector& beta, const GdbInstance& inst, double tol) {
  if (!beta.allFinite() || (beta.array() < -tol).any()) return false;
  const CMatrix c = c_matrix(beta, inst);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c);
  const RVector& ev = eig.eigenvalues();
  const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -tol * scale) return false;

  // Least-squares range test with the same small-eigenvalue cut.
  const CMatrix& u = eig.eigenvectors();
  const double threshold = tol * scale;
  for (const auto& h : inst.channels) {
    const CVector coeff = u.adjoint() * h;
    CVector scaled = CVector::Zero(coeff.size());
    for (int j = 0; j < ev.size(); ++j) {
      if (std::abs(ev(j)) > threshold) scaled(j) = coeff(j) / ev(j);
    }
    const CVector x = u * scaled;
    if ((c * x - h).norm() > tol * h.norm()) return false;
  }
  return true;
}

const char* to_string(FpiStatus status) noexcept {
  switch (status) {
    case FpiStatus::kConverged: return "converged";
    case FpiStatus::kUnbounded: return "unbounded";
    case FpiStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

FpiOutcome fpi_solve(const GdbInstance& inst, const RVector& beta0,
                     const FpiParams& params) {
  if (beta0.size() != inst.users()) {
    throw Error(ErrorCode::kDimensionMismatch, "fpi_solve: beta0 length != K");
  }
  if ((beta0.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidInput, "fpi_solve: beta0 must be >= 0");
  }
  FpiOutcome out;
  out.beta = beta0;
  if (params.record_trace) out.trace.push_back(beta0);
  for (int i = 0; i < params.max_iter; ++i) {
    const auto next = interference_map(out.beta, inst, params.psd_tol);
    out.iterations = i + 1;
    if (!next) {
      out.status = FpiStatus::kUnbounded;
      return out;
    }
    if (params.record_trace) out.trace.push_back(*next);
    out.residual = (*next - out.beta).norm();
    out.beta = *next;
    if (out.beta.maxCoeff() > params.cap) {
      out.status = FpiStatus::kUnbounded;
      return out;
    }
    // Relative floor keeps the test meaningful when beta* is large.
    if (out.residual < params.tol * std::max(1.0, out.beta.lpNorm<Eigen::Infinity>())) {
      out.status = check_f1(out.beta, inst, params.psd_tol)
                       ? FpiStatus::kConverged
                       : FpiStatus::kUnbounded;
      return out;
    }
  }
  out.status = FpiStatus::kIterationLimit;
  return out;
}

RVector solve_power_allocation(const RMatrix& gains,
                               const std::vector<double>& sinr_targets,
                               const std::vector<double>& noise_powers) {
  const auto k = gains.rows();
  if (gains.cols() != k || static_cast<Eigen::Index>(sinr_targets.size()) != k ||
      static_cast<Eigen::Index>(noise_powers.size()) != k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "power allocation: inconsistent dimensions");
  }
  RVector sigma2(k);
  RMatrix system = -gains;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(gains(i, i) > 0.0)) {
      throw Error(ErrorCode::kRecoveryFailure,
                  "power allocation: zero direct gain");
    }
    system(i, i) = gains(i, i) / sinr_targets[i];
    sigma2(i) = noise_powers[i];
  }
  const double scale = system.cwiseAbs().maxCoeff() + sigma2.maxCoeff();

  Eigen::PartialPivLU<RMatrix> lu(system);
  if (lu.rcond() > 1e-12) {
    RVector p = lu.solve(sigma2);
    const double residual = (system * p - sigma2).lpNorm<Eigen::Infinity>();
    if (p.allFinite() && residual <= 1e-10 * scale * (1.0 + p.cwiseAbs().maxCoeff())) {
      if ((p.array() > 0.0).all()) return p;
      throw Error(ErrorCode::kRecoveryFailure,
                  "power allocation: non-positive solution");
    }
  }

  // Ill-conditioned system: p_k <- gamma_k (sum_{j!=k} p_j G_kj + sigma_k^2) / G_kk
  RVector p = RVector::Zero(k);
  for (int iter = 0; iter < 1000000; ++iter) {
    RVector next(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double interference = gains.row(i).dot(p) - gains(i, i) * p(i);
      next(i) = sinr_targets[i] * (interference + sigma2(i)) / gains(i, i);
    }
    if (!next.allFinite() || next.maxCoeff() > 1e300) break;
    const double change = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    if (change <= 1e-12 * std::max(1.0, p.lpNorm<Eigen::Infinity>())) {
      if ((p.array() > 0.0).all()) return p;
      break;
    }
  }
  throw Error(ErrorCode::kRecoveryFailure,
              "power allocation: system has no positive solution");
}

GdbSolution recover_primal(const RVector& beta_star, const GdbInstance& inst,
                           double tol) {
  const CMatrix c = c_matrix(beta_star, inst);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c, Eigen::EigenvaluesOnly);
  const RVector& ev = eig.eigenvalues();
  if (ev.minCoeff() <= tol * (1.0 + ev.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kDegenerateRecovery,
                "recover_primal: C(beta*) is numerically singular");
  }
  Eigen::LLT<CMatrix> llt(c);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateRecovery,
                "recover_primal: Cholesky of C(beta*) failed");
  }

  const int k = inst.users();
  GdbSolution sol;
  sol.beta = beta_star;
  sol.directions.reserve(k);
  for (const auto& h : inst.channels) {
    const CVector x = llt.solve(h);
    sol.directions.push_back(x / x.norm());
  }
  RMatrix gains(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      gains(i, j) = std::norm(inst.channels[i].dot(sol.directions[j]));
    }
  }
  sol.powers = solve_power_allocation(gains, inst.sinr_targets,
                                      inst.noise_powers);
  sol.covariances.reserve(k);
  for (int i = 0; i < k; ++i) {
    const CVector& v = sol.directions[i];
    sol.covariances.push_back(sol.powers(i) * (v * v.adjoint()));
    sol.weighted_objective +=
        sol.powers(i) * v.dot(inst.weighting * v).real();
    sol.total_power += sol.powers(i);
    sol.dual_objective += beta_star(i) * inst.noise_powers[i];
  }
  return sol;
}

const char* to_string(Boundedness verdict) noexcept {
  switch (verdict) {
    case Boundedness::kBounded: return "bounded";
    case Boundedness::kUnbounded: return "unbounded";
    case Boundedness::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

BoundednessResult boundedness(const GdbInstance& inst, const RVector& beta0,
                              const FpiParams& params) {
  BoundednessResult out;
  out.fpi = fpi_solve(inst, beta0, params);
  switch (out.fpi.status) {
    case FpiStatus::kConverged: out.verdict = Boundedness::kBounded; break;
    case FpiStatus::kUnbounded: out.verdict = Boundedness::kUnbounded; break;
    case FpiStatus::kIterationLimit:
      out.verdict = Boundedness::kIndeterminate;
      break;
  }
  return out;
}

GdbResult solve_gdb(const GdbInstance& inst, const RVector& beta0,
                    const FpiParams& params) {
  auto bounded = boundedness(inst, beta0, params);
  GdbResult out{bounded.verdict, std::move(bounded.fpi), std::nullopt};
  if (out.verdict == Boundedness::kBounded) {
    out.solution = recover_primal(out.fpi.beta, inst, params.psd_tol);
  }
  return out;
}

}  // namespace isac
