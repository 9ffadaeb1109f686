#include "isac/trace.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

namespace isac {

TraceRun run_trace(const GdbInstance& inst, const RVector& init,
                   TraceVariant variant, const FpiParams& params) {
  TraceRun run;
  run.init = init;
  if (variant == TraceVariant::kPlain) {
    FpiParams p = params;
    p.record_trace = true;
    auto out = fpi_solve(inst, init, p);
    run.iterates = std::move(out.trace);
    run.status = out.status;
  } else {
    RVector beta = init;
    run.iterates.push_back(beta);
    run.status = FpiStatus::kIterationLimit;
    for (int i = 0; i < params.max_iter; ++i) {
      RVector next = interference_map_raw(beta, inst, params.psd_tol);
      if (!next.allFinite()) {
        run.status = FpiStatus::kUnbounded;
        break;
      }
      next = next.cwiseMax(0.0);
      run.iterates.push_back(next);
      const double res = (next - beta).norm();
      beta = std::move(next);
      if (beta.maxCoeff() > params.cap) {
        run.status = FpiStatus::kUnbounded;
        break;
      }
      if (res < params.tol * std::max(1.0, beta.lpNorm<Eigen::Infinity>())) {
        run.status = FpiStatus::kConverged;
        break;
      }
    }
  }
  for (std::size_t i = 1; i < run.iterates.size(); ++i) {
    run.residuals.push_back((run.iterates[i] - run.iterates[i - 1]).norm());
  }
  return run;
}

void write_trace_csv(const std::string& path, const TraceRun& run) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "iteration";
  for (Eigen::Index k = 0; k < run.init.size(); ++k) out << ",beta_" << (k + 1);
  out << ",residual\n";
  for (std::size_t i = 0; i < run.iterates.size(); ++i) {
    out << i;
    for (Eigen::Index k = 0; k < run.iterates[i].size(); ++k) {
      out << ',' << run.iterates[i](k);
    }
    out << ',';
    if (i > 0) out << run.residuals[i - 1];
    out << '\n';
  }
}

MapGrid grid_for_runs(const std::vector<TraceRun>& runs) {
  MapGrid g;
  double hi1 = 0.0;
  double hi2 = 0.0;
  for (const auto& r : runs) {
    for (const auto& b : r.iterates) {
      if (b.size() < 2 || !b.allFinite()) continue;
      hi1 = std::max(hi1, b(0));
      hi2 = std::max(hi2, b(1));
    }
  }
  g.hi1 = hi1 > 0.0 ? 1.2 * hi1 : 1.0;
  g.hi2 = hi2 > 0.0 ? 1.2 * hi2 : 1.0;
  return g;
}

void write_map_grid_csv(const std::string& path, const GdbInstance& inst,
                        const MapGrid& grid, double tol) {
  if (inst.users() != 2) {
    throw Error(ErrorCode::kInvalidInput, "map grid requires K = 2");
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << std::setprecision(12);
  out << "beta1,beta2,f1,f2,det_c\n";
  const int n = std::max(grid.points, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RVector beta(2);
      beta(0) = grid.lo1 + (grid.hi1 - grid.lo1) * i / (n - 1);
      beta(1) = grid.lo2 + (grid.hi2 - grid.lo2) * j / (n - 1);
      const RVector f = interference_map_raw(beta, inst, tol) - beta;
      const double det = c_matrix(beta, inst).determinant().real();
      out << beta(0) << ',' << beta(1) << ',' << f(0) << ',' << f(1) << ','
          << det << '\n';
    }
  }
}

std::vector<TraceRun> emit_fpi_trace(const GdbInstance& inst,
                                     const std::vector<RVector>& inits,
                                     TraceVariant variant,
                                     const std::string& out_dir,
                                     const FpiParams& params) {
  std::filesystem::create_directories(out_dir);
  std::vector<TraceRun> runs;
  runs.reserve(inits.size());
  for (std::size_t i = 0; i < inits.size(); ++i) {
    runs.push_back(run_trace(inst, inits[i], variant, params));
    write_trace_csv(out_dir + "/trace_" + std::to_string(i) + ".csv",
                    runs.back());
  }
  if (inst.users() == 2) {
    write_map_grid_csv(out_dir + "/map_grid.csv", inst, grid_for_runs(runs),
                       params.psd_tol);
  }
  return runs;
}

}  // namespace isac
