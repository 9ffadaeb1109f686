#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isac/ascent.hpp"
#include "isac/gdb.hpp"
#include "isac/model.hpp"

namespace isac {

using Json = nlohmann::json;

// Instance schema: {M, K, Q, eta, gamma[K], sigma2[K], theta[Q], d[Q],
// h: K arrays of M [re, im] pairs}. Complex matrices are row-major arrays of
// rows of [re, im] pairs.
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const Json& j, int rows, int cols);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

Scenario read_scenario(const std::string& path);
void write_scenario(const std::string& path, const Scenario& s,
                    const Json& meta = Json::object());

/// A GDB instance file is an instance file with an optional "B" (M x M
/// complex) or "lambda" (length Q). B wins when both are present; with
/// neither the weighting is the identity.
struct GdbFile {
  Scenario scenario;
  CMatrix weighting;
  std::optional<RVector> lambda;

  GdbInstance instance() const { return make_gdb_instance(scenario, weighting); }
};

GdbFile gdb_file_from_json(const Json& j);
Json gdb_file_to_json(const GdbFile& f);
GdbFile read_gdb_file(const std::string& path);
void write_gdb_file(const std::string& path, const GdbFile& f);

/// Solution schema: the instance fields plus V (K matrices), p[K],
/// lambda[Q], objective, and optional status / diagnostics.
struct SolutionRecord {
  Scenario scenario;
  std::vector<CMatrix> covariances;
  std::vector<double> powers;
  std::vector<double> lambda;
  double objective = 0.0;
  std::string status;
  std::optional<double> dual_value;
  std::optional<double> sinr_violation;
  std::optional<double> mse_violation;
  std::optional<int> outer_iterations;
  std::optional<double> time_s;
};

SolutionRecord make_solution_record(const Scenario& s, const IsacSolution& sol,
                                    std::optional<double> time_s = {});
Json solution_to_json(const SolutionRecord& r);
SolutionRecord solution_from_json(const Json& j);
SolutionRecord read_solution(const std::string& path);
void write_solution(const std::string& path, const SolutionRecord& r);

/// Per-iteration outer-loop log: t,dual_value,grad_norm,backtracks,step
void write_ascent_log_csv(const std::string& path,
                          const std::vector<AscentLogRecord>& log);

}  // namespace isac
