#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isac/ascent.hpp"
#include "isac/generate.hpp"

namespace isac {

enum class Method { kDualFpi, kDualSdp, kDirectSdp };

const char* to_string(Method m) noexcept;
Method method_from_string(const std::string& name);

/// External convex-optimization oracle, driven through its CLI:
///   <command> solve-sdp <instance.json> --out <solution.json>
///   <command> solve-gdb <gdb-instance.json> --out <solution.json>
/// The oracle writes the solution schema; "status" is "optimal",
/// "unbounded" (or "dual_infeasible"), or a backend failure string.
struct OracleClient {
  std::string command;
  std::string work_dir;

  struct Result {
    std::string status;
    double objective = 0.0;
    std::vector<CMatrix> covariances;
    std::optional<double> time_s;
  };

  Result solve_sdp(const Scenario& s, const std::string& tag) const;
  Result solve_gdb(const Scenario& s, const CMatrix& weighting,
                   const std::string& tag) const;

  /// Inner solver for the outer loop backed by solve-gdb ("Dual-SDP").
  InnerSolver inner_solver(const Scenario& s, const std::string& tag) const;
};

struct BenchmarkConfig {
  std::vector<std::pair<int, int>> cells;  // (K, M)
  int seeds = 20;                          // first_seed .. first_seed+seeds-1
  std::uint64_t first_seed = 1;
  std::vector<Method> methods{Method::kDualFpi};
  GenConfig gen;                           // K, M, seed overwritten per cell
  AscentParams params;
  std::optional<OracleClient> oracle;
  int jobs = 1;
};

struct InstanceResult {
  int users = 0, antennas = 0;
  Method method = Method::kDualFpi;
  std::uint64_t seed = 0;
  int resamples = 0;
  bool ok = false;
  std::string error;
  double time_s = 0.0;
  double objective = 0.0;
  std::optional<double> obj_error;  // relative to Direct SDP, when run
  double sinr_violation = 0.0;
  double mse_violation = 0.0;
};

struct BenchmarkRow {
  int users = 0, antennas = 0;
  Method method = Method::kDualFpi;
  int seed_count = 0;
  int failures = 0;
  double mean_time_s = 0.0;
  double mean_objective = 0.0;
  std::optional<double> mean_obj_error;
  std::optional<double> max_obj_error;
  double max_sinr_violation = 0.0;
  double max_mse_violation = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::vector<InstanceResult> instances;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

void write_report_csv(const std::string& path, const BenchmarkReport& report);
void write_instances_csv(const std::string& path,
                         const BenchmarkReport& report);

}  // namespace isac
