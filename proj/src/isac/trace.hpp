#pragma once

#include <string>
#include <vector>

#include "isac/gdb.hpp"

namespace isac {

enum class TraceVariant { kPlain, kProjected };

struct TraceRun {
  RVector init;
  std::vector<RVector> iterates;  // includes init
  std::vector<double> residuals;  // residuals[i] = ||beta^(i+1) - beta^(i)||
  FpiStatus status = FpiStatus::kIterationLimit;
};

/// Runs the fixed-point map from `init`. The plain variant is exactly
/// fpi_solve; the projected variant iterates beta <- max(I(beta), 0) using
/// the unscreened map, stopping only on a NaN/inf iterate or the cap.
TraceRun run_trace(const GdbInstance& inst, const RVector& init,
                   TraceVariant variant, const FpiParams& params = {});

struct MapGrid {
  double lo1 = 0.0, hi1 = 1.0, lo2 = 0.0, hi2 = 1.0;
  int points = 201;
};

/// Writes trace_<i>.csv (iteration,beta_1..beta_K,residual) per init, and for
/// K = 2 also map_grid.csv (beta1,beta2,f1,f2,det_c) where f_k = I_k - beta_k;
/// the zero contours of f1, f2 and det_c are the curves beta_k = I_k(beta)
/// and det C(beta) = 0. Returns the runs.
std::vector<TraceRun> emit_fpi_trace(const GdbInstance& inst,
                                     const std::vector<RVector>& inits,
                                     TraceVariant variant,
                                     const std::string& out_dir,
                                     const FpiParams& params = {});

/// Grid bounds covering every iterate with a margin.
MapGrid grid_for_runs(const std::vector<TraceRun>& runs);

void write_trace_csv(const std::string& path, const TraceRun& run);
void write_map_grid_csv(const std::string& path, const GdbInstance& inst,
                        const MapGrid& grid, double tol = kPsdTol);

}  // namespace isac
