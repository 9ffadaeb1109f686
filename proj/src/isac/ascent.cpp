#include "isac/ascent.hpp"

#include <algorithm>
#include <cmath>

namespace isac {

void AscentParams::validate() const {
  if (!(alpha0 > 0.0)) throw Error(ErrorCode::kInvalidInput, "alpha0 must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "rho must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !(relative_epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "stopping tolerances must be > 0");
  }
  if (max_outer < 1 || max_backtracks < 0) {
    throw Error(ErrorCode::kInvalidInput, "iteration limits must be positive");
  }
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max)) {
    throw Error(ErrorCode::kInvalidInput, "invalid BB clamp bounds");
  }
  if (!(fpi.tol > 0.0) || fpi.max_iter < 1 || !(fpi.cap > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "invalid inner FPI settings");
  }
}

const char* to_string(AscentStatus status) noexcept {
  switch (status) {
    case AscentStatus::kConverged: return "converged";
    case AscentStatus::kMaxOuter: return "max_outer";
    case AscentStatus::kStalled: return "stalled";
  }
  return "unknown";
}

BeamformingSolution IsacSolution::beamforming() const {
  BeamformingSolution out;
  out.covariances = covariances;
  out.powers.assign(powers.data(), powers.data() + powers.size());
  out.objective = total_power;
  return out;
}

InnerSolver fpi_inner_solver(FpiParams params) {
  params.record_trace = false;
  return [params](const GdbInstance& inst, const RVector& beta0) {
    InnerSolve out;
    auto result = solve_gdb(inst, beta0, params);
    out.verdict = result.verdict;
    out.beta = std::move(result.fpi.beta);
    if (result.solution) {
      out.covariances = std::move(result.solution->covariances);
      out.powers = std::move(result.solution->powers);
      out.value = result.solution->weighted_objective;
    }
    return out;
  };
}

InnerSolve inner_value_and_solution(const RVector& lambda,
                                    const Scenario& scenario,
                                    const SensingOperator& op,
                                    const RVector& beta0,
                                    const InnerSolver& solver) {
  const auto inst = make_gdb_instance(scenario, weighting_matrix(lambda, op));
  return solver(inst, beta0);
}

InnerSolve inner_value_and_solution(const RVector& lambda,
                                    const Scenario& scenario,
                                    const FpiParams& params) {
  const auto op = build_sensing_operator(scenario);
  return inner_value_and_solution(lambda, scenario, op,
                                  default_beta0(scenario.users()),
                                  fpi_inner_solver(params));
}

namespace {

CMatrix sum_of(const std::vector<CMatrix>& v) {
  CMatrix out = v.front();
  for (std::size_t i = 1; i < v.size(); ++i) out += v[i];
  return out;
}

}  // namespace

RVector subgradient(const RVector& lambda, const CMatrix& total_covariance,
                    const SensingOperator& op, double q_eta) {
  RVector g = -2.0 * sensing_map(total_covariance, op);
  const double norm = lambda.norm();
  if (norm > 0.0) g -= (2.0 * std::sqrt(q_eta) / norm) * lambda;
  return g;
}

bool zero_multiplier_optimal(const CMatrix& total_covariance,
                             const SensingOperator& op, double q_eta) {
  return sensing_map(total_covariance, op).norm() <= std::sqrt(q_eta);
}

double bb_stepsize(const RVector& dlambda, const RVector& dgrad, int t,
                   const AscentParams& params) {
  if (t == 0) return params.alpha0;
  const double ss = dlambda.squaredNorm();
  const double sy = std::abs(dlambda.dot(dgrad));
  const double yy = dgrad.squaredNorm();
  double alpha = 0.0;
  if (t % 2 == 1) {
    if (sy == 0.0) return params.alpha0;
    alpha = ss / sy;
  } else {
    if (yy == 0.0) return params.alpha0;
    alpha = sy / yy;
  }
  if (!std::isfinite(alpha) || alpha == 0.0) return params.alpha0;
  return std::clamp(alpha, params.alpha_min, params.alpha_max);
}

double dual_tilde(const RVector& lambda, double d, double q_eta) {
  return d - 2.0 * std::sqrt(q_eta) * lambda.norm();
}

IsacSolution dual_ascent_solve(const Scenario& scenario,
                               const AscentParams& params) {
  return dual_ascent_solve(scenario, params, fpi_inner_solver(params.fpi));
}

IsacSolution dual_ascent_solve(const Scenario& scenario,
                               const AscentParams& params,
                               const InnerSolver& solver) {
  scenario.validate();
  params.validate();
  const auto op = build_sensing_operator(scenario);
  const int q = scenario.grid_size();
  const double q_eta = q * scenario.mse_budget;
  const RVector beta_init = default_beta0(scenario.users());

  // Bounded and recoverable, or empty when the candidate must be rejected.
  auto try_inner = [&](const RVector& lambda,
                       const RVector& beta0) -> std::optional<InnerSolve> {
    try {
      auto inner = inner_value_and_solution(lambda, scenario, op, beta0, solver);
      if (inner.verdict == Boundedness::kBounded && !inner.covariances.empty()) {
        return inner;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateRecovery &&
          e.code() != ErrorCode::kRecoveryFailure) {
        throw;
      }
    }
    return std::nullopt;
  };

  DualState state;
  state.lambda = RVector::Zero(q);
  {
    auto first = try_inner(state.lambda, beta_init);
    if (!first) {
      throw Error(ErrorCode::kInfeasibleScenario,
                  "classical downlink problem (lambda = 0) is infeasible");
    }
    state.inner = std::move(*first);
  }

  IsacSolution out;
  out.status = AscentStatus::kMaxOuter;
  bool reset_step = false;
  int rejected_in_a_row = 0;

  for (int t = 0; t < params.max_outer; ++t) {
    state.iteration = t;
    const CMatrix total = sum_of(state.inner.covariances);
    state.gradient = subgradient(state.lambda, total, op, q_eta);
    const bool at_zero = state.lambda.norm() == 0.0;
    // At lambda = 0 the superdifferential is -2 M(sum V) plus a ball of
    // radius 2 sqrt(Q eta); report its minimum-norm element.
    const double grad_norm =
        at_zero ? std::max(0.0, state.gradient.norm() - 2.0 * std::sqrt(q_eta))
                : state.gradient.norm();

    AscentLogRecord rec;
    rec.iteration = t;
    rec.dual_value = dual_tilde(state.lambda, state.inner.value, q_eta);
    rec.grad_norm = grad_norm;
    out.outer_iterations = t + 1;
    out.grad_norm = grad_norm;

    const bool small_gradient =
        grad_norm <= params.epsilon &&
        grad_norm <= params.relative_epsilon * 2.0 * std::sqrt(q_eta);
    if ((at_zero && zero_multiplier_optimal(total, op, q_eta)) ||
        small_gradient) {
      out.status = AscentStatus::kConverged;
      out.log.push_back(rec);
      break;
    }

    double alpha = params.alpha0;
    if (state.has_history && !reset_step) {
      alpha = bb_stepsize(state.lambda - state.prev_lambda,
                          state.gradient - state.prev_gradient, t, params);
    }
    rec.step = alpha;
    reset_step = false;

    const RVector beta0 =
        (params.warm_start && state.inner.beta.size() == scenario.users())
            ? RVector(state.inner.beta)
            : beta_init;
    std::optional<InnerSolve> accepted;
    RVector candidate;
    double scale = 1.0;
    int ell = 0;
    for (; ell <= params.max_backtracks; ++ell, scale *= params.rho) {
      candidate = state.lambda + (alpha * scale) * state.gradient;
      accepted = try_inner(candidate, beta0);
      if (accepted) break;
    }

    if (!accepted) {
      rec.backtracks = -1;
      out.log.push_back(rec);
      // Keep the BB history; the next attempt restarts from alpha0.
      if (++rejected_in_a_row >= 2) {
        out.status = AscentStatus::kStalled;
        break;
      }
      reset_step = true;
      continue;
    }
    rejected_in_a_row = 0;
    rec.backtracks = ell;
    out.log.push_back(rec);

    state.prev_lambda = state.lambda;
    state.prev_gradient = state.gradient;
    state.has_history = true;
    state.lambda = std::move(candidate);
    state.inner = std::move(*accepted);
  }

  out.covariances = state.inner.covariances;
  out.powers = state.inner.powers;
  out.lambda = state.lambda;
  out.total_power = total_power(out.covariances);
  out.inner_value = state.inner.value;
  out.dual_value = dual_tilde(state.lambda, state.inner.value, q_eta);
  out.violations = check_solution(scenario, out.beamforming());
  return out;
}

}  // namespace isac
