#include "isac/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <thread>

#include "isac/io.hpp"

namespace isac {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::kDualFpi: return "dual-fpi";
    case Method::kDualSdp: return "dual-sdp";
    case Method::kDirectSdp: return "direct-sdp";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "dual-fpi") return Method::kDualFpi;
  if (name == "dual-sdp") return Method::kDualSdp;
  if (name == "direct-sdp") return Method::kDirectSdp;
  throw Error(ErrorCode::kInvalidInput, "unknown method '" + name + "'");
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::atomic<std::uint64_t> g_oracle_calls{0};

OracleClient::Result run_oracle(const OracleClient& client,
                                const std::string& subcommand,
                                const Json& input, const Scenario& s,
                                const std::string& tag) {
  std::filesystem::create_directories(client.work_dir);
  const auto id = g_oracle_calls.fetch_add(1);
  const std::string stem =
      client.work_dir + "/" + tag + "_" + std::to_string(id);
  const std::string in_path = stem + "_in.json";
  const std::string out_path = stem + "_out.json";
  write_json_file(in_path, input);
  const std::string cmd = client.command + " " + subcommand + " " +
                          shell_quote(in_path) + " --out " +
                          shell_quote(out_path);
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  OracleClient::Result r;
  if (!std::filesystem::exists(out_path)) {
    throw Error(ErrorCode::kIo, "oracle produced no output (exit " +
                                    std::to_string(rc) + "): " + cmd);
  }
  const Json out = read_json_file(out_path);
  r.status = out.value("status", std::string("unknown"));
  if (out.contains("objective") && out.at("objective").is_number()) {
    r.objective = out.at("objective").get<double>();
  }
  if (out.contains("V") && out.at("V").is_array()) {
    for (const auto& v : out.at("V")) {
      r.covariances.push_back(matrix_from_json(v, s.antennas, s.antennas));
    }
  }
  r.time_s = out.contains("time_s") && out.at("time_s").is_number()
                 ? std::optional<double>(out.at("time_s").get<double>())
                 : std::optional<double>(wall);
  std::filesystem::remove(in_path);
  std::filesystem::remove(out_path);
  return r;
}

}  // namespace

OracleClient::Result OracleClient::solve_sdp(const Scenario& s,
                                             const std::string& tag) const {
  return run_oracle(*this, "solve-sdp", scenario_to_json(s), s, tag);
}

OracleClient::Result OracleClient::solve_gdb(const Scenario& s,
                                             const CMatrix& weighting,
                                             const std::string& tag) const {
  GdbFile f{s, weighting, std::nullopt};
  return run_oracle(*this, "solve-gdb", gdb_file_to_json(f), s, tag);
}

InnerSolver OracleClient::inner_solver(const Scenario& s,
                                       const std::string& tag) const {
  return [client = *this, s, tag](const GdbInstance& inst, const RVector&) {
    InnerSolve out;
    const auto r = client.solve_gdb(s, inst.weighting, tag);
    if (r.status == "optimal" &&
        static_cast<int>(r.covariances.size()) == inst.users()) {
      out.verdict = Boundedness::kBounded;
      out.covariances = r.covariances;
      out.powers = RVector(inst.users());
      CMatrix total = CMatrix::Zero(inst.antennas(), inst.antennas());
      for (int k = 0; k < inst.users(); ++k) {
        out.powers(k) = r.covariances[k].trace().real();
        total += r.covariances[k];
      }
      out.value = inner(inst.weighting, hermitian_part(total));
    } else if (r.status == "unbounded" || r.status == "dual_infeasible") {
      out.verdict = Boundedness::kUnbounded;
    } else {
      out.verdict = Boundedness::kIndeterminate;
    }
    return out;
  };
}

namespace {

struct Task {
  int users, antennas;
  std::uint64_t seed;
};

std::vector<InstanceResult> run_task(const BenchmarkConfig& cfg,
                                     const Task& task) {
  GenConfig gen = cfg.gen;
  gen.users = task.users;
  gen.antennas = task.antennas;
  gen.seed = task.seed;
  const auto screened = generate_screened_scenario(gen, cfg.params);

  std::vector<InstanceResult> results;
  for (Method m : cfg.methods) {
    InstanceResult r;
    r.users = task.users;
    r.antennas = task.antennas;
    r.method = m;
    r.seed = task.seed;
    r.resamples = screened.resamples;
    if (!screened.accepted) {
      r.error = "screening rejected every draw";
      results.push_back(r);
      continue;
    }
    const Scenario& s = screened.scenario;
    const std::string tag = "k" + std::to_string(task.users) + "m" +
                            std::to_string(task.antennas) + "s" +
                            std::to_string(task.seed);
    try {
      if (m != Method::kDualFpi && !cfg.oracle) {
        throw Error(ErrorCode::kInvalidInput,
                    std::string(to_string(m)) + " requires an oracle");
      }
      if (m == Method::kDirectSdp) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto o = cfg.oracle->solve_sdp(s, tag);
        const double wall = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        r.time_s = o.time_s.value_or(wall);
        if (o.status != "optimal") throw Error(ErrorCode::kInternal, "oracle: " + o.status);
        r.objective = o.objective;
        if (static_cast<int>(o.covariances.size()) == s.users()) {
          BeamformingSolution b{o.covariances, {}, o.objective};
          const auto v = check_solution(s, b);
          r.sinr_violation = v.sinr_violation;
          r.mse_violation = v.mse_violation;
        }
        r.ok = true;
      } else {
        const auto solver = m == Method::kDualFpi
                                ? fpi_inner_solver(cfg.params.fpi)
                                : cfg.oracle->inner_solver(s, tag);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sol = dual_ascent_solve(s, cfg.params, solver);
        r.time_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
        r.objective = sol.total_power;
        r.sinr_violation = sol.violations.sinr_violation;
        r.mse_violation = sol.violations.mse_violation;
        r.ok = sol.status == AscentStatus::kConverged;
        if (!r.ok) r.error = to_string(sol.status);
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
    results.push_back(r);
  }

  const auto ref = std::find_if(results.begin(), results.end(), [](const auto& r) {
    return r.method == Method::kDirectSdp && r.ok;
  });
  if (ref != results.end()) {
    for (auto& r : results) {
      if (r.ok) r.obj_error = std::abs(r.objective - ref->objective) / std::abs(ref->objective);
    }
  }
  return results;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  cfg.params.validate();
  if (cfg.seeds < 1) throw Error(ErrorCode::kInvalidInput, "seeds must be >= 1");
  std::vector<Task> tasks;
  for (const auto& [k, m] : cfg.cells) {
    for (int s = 0; s < cfg.seeds; ++s) {
      tasks.push_back({k, m, cfg.first_seed + static_cast<std::uint64_t>(s)});
    }
  }

  std::vector<std::vector<InstanceResult>> per_task(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      per_task[i] = run_task(cfg, tasks[i]);
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  BenchmarkReport report;
  for (auto& rs : per_task) {
    for (auto& r : rs) report.instances.push_back(std::move(r));
  }
  for (const auto& [k, m] : cfg.cells) {
    for (Method method : cfg.methods) {
      BenchmarkRow row;
      row.users = k;
      row.antennas = m;
      row.method = method;
      int ok = 0;
      int with_error = 0;
      double err_sum = 0.0;
      for (const auto& r : report.instances) {
        if (r.users != k || r.antennas != m || r.method != method) continue;
        ++row.seed_count;
        if (!r.ok) {
          ++row.failures;
          continue;
        }
        ++ok;
        row.mean_time_s += r.time_s;
        row.mean_objective += r.objective;
        row.max_sinr_violation = std::max(row.max_sinr_violation, r.sinr_violation);
        row.max_mse_violation = std::max(row.max_mse_violation, r.mse_violation);
        if (r.obj_error) {
          ++with_error;
          err_sum += *r.obj_error;
          row.max_obj_error = std::max(row.max_obj_error.value_or(0.0), *r.obj_error);
        }
      }
      if (ok > 0) {
        row.mean_time_s /= ok;
        row.mean_objective /= ok;
      }
      if (with_error > 0) row.mean_obj_error = err_sum / with_error;
      report.rows.push_back(row);
    }
  }
  return report;
}

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

void write_report_csv(const std::string& path, const BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << std::setprecision(6);
  out << "K,M,method,seeds,failures,mean_time_s,mean_objective,"
         "mean_obj_error,max_obj_error,max_sinr_violation,max_mse_violation\n";
  for (const auto& r : report.rows) {
    out << r.users << ',' << r.antennas << ',' << to_string(r.method) << ','
        << r.seed_count << ',' << r.failures << ',' << r.mean_time_s << ','
        << r.mean_objective << ',';
    put(out, r.mean_obj_error);
    out << ',';
    put(out, r.max_obj_error);
    out << ',' << r.max_sinr_violation << ',' << r.max_mse_violation << '\n';
  }
}

void write_instances_csv(const std::string& path,
                         const BenchmarkReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "K,M,method,seed,resamples,ok,time_s,objective,obj_error,"
         "sinr_violation,mse_violation,error\n";
  for (const auto& r : report.instances) {
    out << r.users << ',' << r.antennas << ',' << to_string(r.method) << ','
        << r.seed << ',' << r.resamples << ',' << (r.ok ? 1 : 0) << ','
        << r.time_s << ',' << r.objective << ',';
    put(out, r.obj_error);
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << ',' << r.sinr_violation << ',' << r.mse_violation << ',' << err
        << '\n';
  }
}

}  // namespace isac
