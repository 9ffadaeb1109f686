#include "isac/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

namespace isac {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kParse, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    parse_error(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("field '") + key + "': " + e.what());
  }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    parse_error("complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> real_array(const Json& j, const char* key,
                               std::size_t expected) {
  auto v = get_as<std::vector<double>>(j, key);
  if (v.size() != expected) {
    parse_error(std::string("field '") + key + "' has length " +
                std::to_string(v.size()) + ", expected " +
                std::to_string(expected));
  }
  return v;
}

}  // namespace

Json matrix_to_json(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    parse_error("matrix has wrong number of rows");
  }
  CMatrix a(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      parse_error("matrix row has wrong length");
    }
    for (int c = 0; c < cols; ++c) a(r, c) = complex_from_json(j[r][c]);
  }
  return a;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["M"] = s.antennas;
  j["K"] = s.users();
  j["Q"] = s.grid_size();
  j["eta"] = s.mse_budget;
  j["gamma"] = s.sinr_targets;
  j["sigma2"] = s.noise_powers;
  j["theta"] = s.grid;
  j["d"] = s.desired;
  Json h = Json::array();
  for (const auto& ch : s.channels) {
    Json v = Json::array();
    for (Eigen::Index m = 0; m < ch.size(); ++m) v.push_back(complex_to_json(ch(m)));
    h.push_back(std::move(v));
  }
  j["h"] = std::move(h);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.antennas = get_as<int>(j, "M");
  const int k = get_as<int>(j, "K");
  const int q = get_as<int>(j, "Q");
  if (s.antennas < 1 || k < 1 || q < 1) parse_error("M, K, Q must be >= 1");
  s.mse_budget = get_as<double>(j, "eta");
  s.sinr_targets = real_array(j, "gamma", k);
  s.noise_powers = real_array(j, "sigma2", k);
  s.grid = real_array(j, "theta", q);
  s.desired = real_array(j, "d", q);
  const Json& h = field(j, "h");
  if (!h.is_array() || static_cast<int>(h.size()) != k) {
    parse_error("field 'h' must hold K channel vectors");
  }
  for (const auto& ch : h) {
    if (!ch.is_array() || static_cast<int>(ch.size()) != s.antennas) {
      parse_error("each channel must hold M [re, im] pairs");
    }
    CVector v(s.antennas);
    for (int m = 0; m < s.antennas; ++m) v(m) = complex_from_json(ch[m]);
    s.channels.push_back(std::move(v));
  }
  s.validate();
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

Scenario read_scenario(const std::string& path) {
  return scenario_from_json(read_json_file(path));
}

void write_scenario(const std::string& path, const Scenario& s,
                    const Json& meta) {
  Json j = scenario_to_json(s);
  if (!meta.empty()) j["meta"] = meta;
  write_json_file(path, j);
}

GdbFile gdb_file_from_json(const Json& j) {
  GdbFile f;
  f.scenario = scenario_from_json(j);
  const int m = f.scenario.antennas;
  if (j.contains("lambda")) {
    const auto lam = real_array(j, "lambda", f.scenario.grid_size());
    f.lambda = Eigen::Map<const RVector>(lam.data(), lam.size());
  }
  if (j.contains("B")) {
    const CMatrix b = matrix_from_json(j.at("B"), m, m);
    if ((b - b.adjoint()).norm() > 1e-9 * (1.0 + b.norm())) {
      throw Error(ErrorCode::kInvalidInput, "B is not Hermitian");
    }
    f.weighting = hermitian_part(b);
  } else if (f.lambda) {
    f.weighting = weighting_matrix(*f.lambda, build_sensing_operator(f.scenario));
  } else {
    f.weighting = CMatrix::Identity(m, m);
  }
  return f;
}

Json gdb_file_to_json(const GdbFile& f) {
  Json j = scenario_to_json(f.scenario);
  j["B"] = matrix_to_json(f.weighting);
  if (f.lambda) {
    j["lambda"] = std::vector<double>(f.lambda->data(),
                                      f.lambda->data() + f.lambda->size());
  }
  return j;
}

GdbFile read_gdb_file(const std::string& path) {
  return gdb_file_from_json(read_json_file(path));
}

void write_gdb_file(const std::string& path, const GdbFile& f) {
  write_json_file(path, gdb_file_to_json(f));
}

SolutionRecord make_solution_record(const Scenario& s, const IsacSolution& sol,
                                    std::optional<double> time_s) {
  SolutionRecord r;
  r.scenario = s;
  r.covariances = sol.covariances;
  r.powers.assign(sol.powers.data(), sol.powers.data() + sol.powers.size());
  r.lambda.assign(sol.lambda.data(), sol.lambda.data() + sol.lambda.size());
  r.objective = sol.total_power;
  r.status = to_string(sol.status);
  r.dual_value = sol.dual_value;
  r.sinr_violation = sol.violations.sinr_violation;
  r.mse_violation = sol.violations.mse_violation;
  r.outer_iterations = sol.outer_iterations;
  r.time_s = time_s;
  return r;
}

Json solution_to_json(const SolutionRecord& r) {
  Json j = scenario_to_json(r.scenario);
  Json v = Json::array();
  for (const auto& c : r.covariances) v.push_back(matrix_to_json(c));
  j["V"] = std::move(v);
  j["p"] = r.powers;
  j["lambda"] = r.lambda;
  j["objective"] = r.objective;
  if (!r.status.empty()) j["status"] = r.status;
  if (r.dual_value) j["dual_value"] = *r.dual_value;
  if (r.sinr_violation) j["sinr_violation"] = *r.sinr_violation;
  if (r.mse_violation) j["mse_violation"] = *r.mse_violation;
  if (r.outer_iterations) j["outer_iterations"] = *r.outer_iterations;
  if (r.time_s) j["time_s"] = *r.time_s;
  return j;
}

SolutionRecord solution_from_json(const Json& j) {
  SolutionRecord r;
  r.scenario = scenario_from_json(j);
  const int m = r.scenario.antennas;
  const int k = r.scenario.users();
  r.objective = get_as<double>(j, "objective");
  if (j.contains("status")) r.status = get_as<std::string>(j, "status");
  if (j.contains("V")) {
    const Json& v = j.at("V");
    if (!v.is_array() || static_cast<int>(v.size()) != k) {
      parse_error("field 'V' must hold K matrices");
    }
    for (const auto& c : v) r.covariances.push_back(matrix_from_json(c, m, m));
  }
  if (j.contains("p")) r.powers = real_array(j, "p", k);
  if (j.contains("lambda")) {
    r.lambda = real_array(j, "lambda", r.scenario.grid_size());
  }
  auto opt_double = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return get_as<double>(j, key);
  };
  r.dual_value = opt_double("dual_value");
  r.sinr_violation = opt_double("sinr_violation");
  r.mse_violation = opt_double("mse_violation");
  r.time_s = opt_double("time_s");
  if (j.contains("outer_iterations")) {
    r.outer_iterations = get_as<int>(j, "outer_iterations");
  }
  return r;
}

SolutionRecord read_solution(const std::string& path) {
  return solution_from_json(read_json_file(path));
}

void write_solution(const std::string& path, const SolutionRecord& r) {
  write_json_file(path, solution_to_json(r));
}

void write_ascent_log_csv(const std::string& path,
                          const std::vector<AscentLogRecord>& log) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "t,dual_value,grad_norm,backtracks,step\n";
  for (const auto& r : log) {
    out << r.iteration << ',' << r.dual_value << ',' << r.grad_norm << ','
        << r.backtracks << ',' << r.step << '\n';
  }
}

}  // namespace isac
