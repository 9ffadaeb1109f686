#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isac/gdb.hpp"
#include "isac/model.hpp"

namespace isac {

/// Outcome of one inner GDB solve at a fixed multiplier.
struct InnerSolve {
  Boundedness verdict = Boundedness::kIndeterminate;
  std::vector<CMatrix> covariances;
  RVector powers;
  RVector beta;        // dual point, empty for solvers that do not expose it
  double value = 0.0;  // d(lambda) = tr(B(lambda) sum_k V_k)
};

/// Pluggable inner solver; the default runs the fixed-point iteration.
using InnerSolver =
    std::function<InnerSolve(const GdbInstance&, const RVector& beta0)>;

InnerSolver fpi_inner_solver(FpiParams params = {});

struct AscentParams {
  double alpha0 = 0.1;
  double rho = 0.5;
  double epsilon = 1e-4;
  // Also require ||g|| <= relative_epsilon * 2 sqrt(Q eta). The subgradient
  // scales with sqrt(Q eta), so the absolute test alone stops far from the
  // MSE boundary when eta is small. Infinity disables it.
  double relative_epsilon = 1e-8;
  int max_outer = 10000;
  double alpha_min = 1e-6;
  double alpha_max = 1e2;
  int max_backtracks = 60;
  // Start every inner FPI from the previous beta* instead of 100 * 1.
  bool warm_start = false;
  FpiParams fpi;

  void validate() const;
};

/// Multiplier state of the outer loop.
struct DualState {
  RVector lambda;
  RVector prev_lambda;
  RVector gradient;
  RVector prev_gradient;
  bool has_history = false;
  int iteration = 0;
  InnerSolve inner;
};

struct AscentLogRecord {
  int iteration = 0;
  double dual_value = 0.0;  // d~(lambda^(t))
  double grad_norm = 0.0;   // min-norm supergradient at lambda = 0
  int backtracks = 0;       // l_t; -1 when the step was rejected
  double step = 0.0;        // alpha_t before backtracking
};

enum class AscentStatus { kConverged, kMaxOuter, kStalled };

const char* to_string(AscentStatus status) noexcept;

struct IsacSolution {
  AscentStatus status = AscentStatus::kMaxOuter;
  std::vector<CMatrix> covariances;
  RVector powers;
  RVector lambda;
  double total_power = 0.0;
  double dual_value = 0.0;  // d~(lambda*)
  double inner_value = 0.0;  // d(lambda*)
  double grad_norm = 0.0;  // as in AscentLogRecord
  int outer_iterations = 0;
  ViolationReport violations;
  std::vector<AscentLogRecord> log;

  BeamformingSolution beamforming() const;
};

/// d(lambda) and the recovered inner optimum at B(lambda).
InnerSolve inner_value_and_solution(const RVector& lambda,
                                    const Scenario& scenario,
                                    const SensingOperator& op,
                                    const RVector& beta0,
                                    const InnerSolver& solver);

InnerSolve inner_value_and_solution(const RVector& lambda,
                                    const Scenario& scenario,
                                    const FpiParams& params = {});

/// -2 M(sum V) - 2 sqrt(Q eta) lambda / ||lambda||; the norm term is taken
/// as zero at lambda = 0.
RVector subgradient(const RVector& lambda, const CMatrix& total_covariance,
                    const SensingOperator& op, double q_eta);

/// Optimality at lambda = 0: 0 lies in the superdifferential when
/// ||M(sum V)|| <= sqrt(Q eta).
bool zero_multiplier_optimal(const CMatrix& total_covariance,
                             const SensingOperator& op, double q_eta);

/// Alternating Barzilai-Borwein step for ascent (BB1 on odd t, BB2 on even).
double bb_stepsize(const RVector& dlambda, const RVector& dgrad, int t,
                   const AscentParams& params);

/// d~(lambda) = d - 2 sqrt(Q eta) ||lambda||
double dual_tilde(const RVector& lambda, double d, double q_eta);

IsacSolution dual_ascent_solve(const Scenario& scenario,
                               const AscentParams& params = {});

IsacSolution dual_ascent_solve(const Scenario& scenario,
                               const AscentParams& params,
                               const InnerSolver& solver);

}  // namespace isac
