#pragma once

#include <optional>
#include <vector>

#include "isac/model.hpp"
#include "isac/types.hpp"

namespace isac {

/// Generalized downlink beamforming problem:
///   min tr(B sum_k V_k)  s.t. the SINR constraints, V_k >= 0,
/// where the weighting matrix B may be indefinite.
struct GdbInstance {
  CMatrix weighting;                 // B
  std::vector<CVector> channels;     // h_k
  std::vector<double> sinr_targets;  // gamma_k
  std::vector<double> noise_powers;  // sigma_k^2

  int users() const { return static_cast<int>(channels.size()); }
  int antennas() const { return static_cast<int>(weighting.rows()); }
  void validate() const;
};

GdbInstance make_gdb_instance(const Scenario& scenario, CMatrix weighting);

/// B(lambda) = I - 2 sum_q lambda_q M_q
CMatrix weighting_matrix(const RVector& lambda, const SensingOperator& op);

/// C(beta) = B + sum_j beta_j h_j h_j^H
CMatrix c_matrix(const RVector& beta, const GdbInstance& inst);

inline constexpr double kPsdTol = 1e-9;

/// I_k(beta) = (gamma_k / (gamma_k + 1)) / (h_k^H C(beta)^{-1} h_k).
/// Empty when some h_k leaves the range of C(beta) or the quadratic form is
/// not positive.
std::optional<RVector> interference_map(const RVector& beta,
                                        const GdbInstance& inst,
                                        double tol = kPsdTol);

/// Same formula without the evaluability screen: components may be negative
/// (indefinite C) and are NaN where h_k is outside the range of C(beta).
RVector interference_map_raw(const RVector& beta, const GdbInstance& inst,
                             double tol = kPsdTol);

/// beta >= 0, C(beta) PSD, and every h_k in the range of C(beta).
bool check_f1(const RVector& beta, const GdbInstance& inst,
              double tol = kPsdTol);

enum class FpiStatus { kConverged, kUnbounded, kIterationLimit };

const char* to_string(FpiStatus status) noexcept;

struct FpiParams {
  double tol = 1e-12;
  int max_iter = 10000;
  double cap = 1e12;
  double psd_tol = kPsdTol;
  bool record_trace = true;
};

struct FpiOutcome {
  FpiStatus status = FpiStatus::kIterationLimit;
  RVector beta;                // beta* when converged, last iterate otherwise
  std::vector<RVector> trace;  // beta^(0), beta^(1), ...
  double residual = 0.0;       // ||beta^(i+1) - beta^(i)|| at exit
  int iterations = 0;
};

/// Iterates beta <- I(beta) from beta0. Unbounded on a non-evaluable iterate,
/// a component above the cap, or a fixed point outside F1.
FpiOutcome fpi_solve(const GdbInstance& inst, const RVector& beta0,
                     const FpiParams& params = {});

inline RVector default_beta0(int users) {
  return RVector::Constant(users, 100.0);
}

struct GdbSolution {
  std::vector<CMatrix> covariances;  // V_k = p_k v_k v_k^H
  std::vector<CVector> directions;   // unit-norm v_k
  RVector powers;                    // p_k
  RVector beta;                      // dual solution used for recovery
  double weighted_objective = 0.0;   // tr(B sum_k V_k)
  double total_power = 0.0;          // sum_k tr(V_k)
  double dual_objective = 0.0;       // sum_k beta_k sigma_k^2
};

/// Solves (1 + 1/gamma_k) p_k G_kk = sum_j p_j G_kj + sigma_k^2 for p > 0.
RVector solve_power_allocation(const RMatrix& gains,
                               const std::vector<double>& sinr_targets,
                               const std::vector<double>& noise_powers);

/// Rank-one KKT reconstruction from the converged dual point. Requires
/// C(beta*) positive definite.
GdbSolution recover_primal(const RVector& beta_star, const GdbInstance& inst,
                           double tol = kPsdTol);

enum class Boundedness { kBounded, kUnbounded, kIndeterminate };

const char* to_string(Boundedness verdict) noexcept;

struct BoundednessResult {
  Boundedness verdict = Boundedness::kIndeterminate;
  FpiOutcome fpi;
};

BoundednessResult boundedness(const GdbInstance& inst, const RVector& beta0,
                              const FpiParams& params = {});

/// Boundedness test followed by primal recovery when bounded.
struct GdbResult {
  Boundedness verdict = Boundedness::kIndeterminate;
  FpiOutcome fpi;
  std::optional<GdbSolution> solution;
};

GdbResult solve_gdb(const GdbInstance& inst, const RVector& beta0,
                    const FpiParams& params = {});

}  // namespace isac
