// Command-line front end; talks to the solver only through the C API.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isacbf.h"

namespace {

int fail(isac_status st, const std::string& what) {
  std::cerr << "error: " << what << ": " << isac_status_string(st);
  const std::string detail = isac_last_error();
  if (!detail.empty()) std::cerr << " (" << detail << ")";
  std::cerr << '\n';
  return 1;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TolFlags {
  std::optional<double> tol_inner;
  std::optional<double> tol_outer;
  std::optional<double> tol_outer_rel;
  std::optional<int> max_outer;
  bool warm_start = false;

  void add(CLI::App* app) {
    app->add_option("--tol-inner", tol_inner, "FPI stopping tolerance");
    app->add_option("--tol-outer", tol_outer, "absolute subgradient-norm stop");
    app->add_option("--tol-outer-rel", tol_outer_rel,
                    "relative stop: ||g|| <= rel * 2 sqrt(Q eta)");
    app->add_option("--max-outer", max_outer, "outer iteration limit");
    app->add_flag("--warm-start", warm_start, "warm-start inner FPI");
  }

  isac_ascent_params params() const {
    isac_ascent_params p;
    isac_ascent_params_default(&p);
    if (tol_inner) p.fpi_tol = *tol_inner;
    if (tol_outer) p.epsilon = *tol_outer;
    if (tol_outer_rel) p.relative_epsilon = *tol_outer_rel;
    if (max_outer) p.max_outer = *max_outer;
    p.warm_start = warm_start ? 1 : 0;
    return p;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISAC beamforming: dual ascent with fixed-point inner solves"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "draw random instance files");
  isac_gen_config gcfg;
  isac_gen_config_default(&gcfg);
  int count = 1;
  bool no_screen = false;
  std::string gen_out = ".";
  gen->add_option("--K", gcfg.users, "users")->capture_default_str();
  gen->add_option("--M", gcfg.antennas, "antennas")->capture_default_str();
  gen->add_option("--Q", gcfg.grid_size, "grid points")->capture_default_str();
  gen->add_option("--seed", gcfg.seed, "first seed")->capture_default_str();
  gen->add_option("--count", count, "number of instances (consecutive seeds)");
  gen->add_flag("--no-screen", no_screen, "skip feasibility screening");
  gen->add_option("--out-dir", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance file");
  std::string instance_path, solution_path, log_path;
  TolFlags solve_tol;
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--out", solution_path, "solution file");
  solve->add_option("--log", log_path, "per-iteration CSV log");
  solve_tol.add(solve);

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark over (K, M) cells");
  std::string cells_text = "2x2";
  std::string methods_text = "dual-fpi";
  std::string oracle_cmd, report_path = "report.csv", instances_path;
  std::string bench_out_dir = ".";
  std::string work_dir;
  int seeds = 20;
  std::uint64_t bench_seed = 1;
  int jobs = 1;
  TolFlags bench_tol;
  bench->add_option("--cells", cells_text, "comma list of KxM")->capture_default_str();
  bench->add_option("--seeds", seeds, "seeds per cell")->capture_default_str();
  bench->add_option("--seed", bench_seed, "first seed")->capture_default_str();
  bench->add_option("--methods", methods_text,
                    "comma list of dual-fpi, dual-sdp, direct-sdp")
      ->capture_default_str();
  bench->add_option("--oracle", oracle_cmd, "oracle command (SDP methods)");
  bench->add_option("--out-dir", bench_out_dir, "directory for report files");
  bench->add_option("--out", report_path, "report CSV name")->capture_default_str();
  bench->add_option("--instances", instances_path, "per-instance CSV name");
  bench->add_option("--work-dir", work_dir, "scratch directory for the oracle");
  bench->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  bench_tol.add(bench);

  // trace
  auto* trace = app.add_subcommand("trace", "emit FPI trajectories as CSV");
  std::string gdb_path, variant = "plain", trace_out = "trace";
  std::vector<std::string> inits_text;
  trace->add_option("instance", gdb_path, "instance file with B or lambda")->required();
  trace->add_option("--init", inits_text, "initial beta, comma separated (repeatable)")
      ->required();
  trace->add_option("--variant", variant, "plain or projected")
      ->check(CLI::IsMember({"plain", "projected"}));
  trace->add_option("--out-dir", trace_out, "output directory");

  // gdb
  auto* gdb = app.add_subcommand("gdb", "solve one inner GDB instance");
  std::string gdb_solve_path, beta0_text;
  double gdb_tol = 0.0;
  gdb->add_option("instance", gdb_solve_path, "instance file with B or lambda")->required();
  gdb->add_option("--beta0", beta0_text, "initial beta, comma separated");
  gdb->add_option("--tol-inner", gdb_tol, "FPI stopping tolerance");

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    std::filesystem::create_directories(gen_out);
    for (int i = 0; i < count; ++i) {
      isac_gen_config c = gcfg;
      c.seed = gcfg.seed + static_cast<std::uint64_t>(i);
      isac_scenario* s = nullptr;
      int resamples = 0;
      auto st = isac_scenario_generate(&c, no_screen ? 0 : 1, &s, &resamples);
      if (st != ISAC_OK) return fail(st, "generate seed " + std::to_string(c.seed));
      const std::string path =
          gen_out + "/instance_k" + std::to_string(c.users) + "_m" +
          std::to_string(c.antennas) + "_s" + std::to_string(c.seed) + ".json";
      st = isac_scenario_save(s, path.c_str());
      isac_scenario_free(s);
      if (st != ISAC_OK) return fail(st, "write " + path);
      std::cout << path << " (resamples " << resamples << ")\n";
    }
    return 0;
  }

  if (*solve) {
    isac_scenario* s = nullptr;
    auto st = isac_scenario_load(instance_path.c_str(), &s);
    if (st != ISAC_OK) return fail(st, "load " + instance_path);
    const auto params = solve_tol.params();
    isac_solution* sol = nullptr;
    st = isac_solve(s, &params, &sol);
    isac_scenario_free(s);
    if (st != ISAC_OK) return fail(st, "solve");
    isac_solution_summary sum;
    isac_solution_summary_get(sol, &sum);
    const char* names[] = {"converged", "max_outer", "stalled"};
    std::printf(
        "status=%s objective=%.12g dual=%.12g grad_norm=%.3e outer=%d "
        "sinr_violation=%.3e mse_violation=%.3e time_s=%.6f\n",
        names[sum.status], sum.objective, sum.dual_value, sum.grad_norm,
        sum.outer_iterations, sum.sinr_violation, sum.mse_violation,
        sum.solve_time_s);
    if (!solution_path.empty()) {
      st = isac_solution_save(sol, solution_path.c_str());
      if (st != ISAC_OK) {
        isac_solution_free(sol);
        return fail(st, "write " + solution_path);
      }
    }
    if (!log_path.empty()) {
      st = isac_solution_write_log(sol, log_path.c_str());
      if (st != ISAC_OK) {
        isac_solution_free(sol);
        return fail(st, "write " + log_path);
      }
    }
    isac_solution_free(sol);
    return sum.status == ISAC_ASCENT_CONVERGED ? 0 : 2;
  }

  if (*bench) {
    std::vector<int> cells;
    for (const auto& cell : split(cells_text, ',')) {
      const auto x = cell.find('x');
      if (x == std::string::npos) {
        std::cerr << "error: bad cell '" << cell << "', expected KxM\n";
        return 1;
      }
      cells.push_back(std::stoi(cell.substr(0, x)));
      cells.push_back(std::stoi(cell.substr(x + 1)));
    }
    unsigned methods = 0;
    for (const auto& m : split(methods_text, ',')) {
      if (m == "dual-fpi") {
        methods |= ISAC_METHOD_DUAL_FPI;
      } else if (m == "dual-sdp") {
        methods |= ISAC_METHOD_DUAL_SDP;
      } else if (m == "direct-sdp") {
        methods |= ISAC_METHOD_DIRECT_SDP;
      } else {
        std::cerr << "error: unknown method '" << m << "'\n";
        return 1;
      }
    }
    std::filesystem::create_directories(bench_out_dir);
    const std::string report = bench_out_dir + "/" + report_path;
    const std::string per_instance =
        instances_path.empty() ? "" : bench_out_dir + "/" + instances_path;
    if (work_dir.empty()) work_dir = bench_out_dir + "/oracle_work";
    const auto params = bench_tol.params();
    isac_bench_config cfg{cells.data(),
                          cells.size() / 2,
                          seeds,
                          bench_seed,
                          methods,
                          jobs,
                          oracle_cmd.empty() ? nullptr : oracle_cmd.c_str(),
                          work_dir.c_str(),
                          &params};
    const auto st = isac_bench_run(&cfg, report.c_str(),
                                   per_instance.empty() ? nullptr : per_instance.c_str());
    if (st != ISAC_OK) return fail(st, "bench");
    std::cout << report << '\n';
    return 0;
  }

  if (*trace) {
    isac_gdb* g = nullptr;
    auto st = isac_gdb_load(gdb_path.c_str(), &g);
    if (st != ISAC_OK) return fail(st, "load " + gdb_path);
    int k = 0;
    isac_gdb_users(g, &k);
    std::vector<double> inits;
    for (const auto& text : inits_text) {
      const auto v = parse_doubles(text);
      if (static_cast<int>(v.size()) != k) {
        isac_gdb_free(g);
        std::cerr << "error: --init needs " << k << " values\n";
        return 1;
      }
      inits.insert(inits.end(), v.begin(), v.end());
    }
    st = isac_gdb_emit_trace(g, inits.data(), inits_text.size(),
                             variant == "projected" ? 1 : 0, trace_out.c_str());
    isac_gdb_free(g);
    if (st != ISAC_OK) return fail(st, "trace");
    std::cout << trace_out << '\n';
    return 0;
  }

  if (*gdb) {
    isac_gdb* g = nullptr;
    auto st = isac_gdb_load(gdb_solve_path.c_str(), &g);
    if (st != ISAC_OK) return fail(st, "load " + gdb_solve_path);
    int k = 0;
    isac_gdb_users(g, &k);
    std::vector<double> beta0 = beta0_text.empty() ? std::vector<double>{}
                                                   : parse_doubles(beta0_text);
    if (!beta0.empty() && static_cast<int>(beta0.size()) != k) {
      isac_gdb_free(g);
      std::cerr << "error: --beta0 needs " << k << " values\n";
      return 1;
    }
    std::vector<double> beta(k);
    isac_gdb_summary sum;
    st = isac_gdb_solve(g, beta0.empty() ? nullptr : beta0.data(), gdb_tol, 0,
                        &sum, beta.data());
    isac_gdb_free(g);
    if (st != ISAC_OK) return fail(st, "gdb solve");
    const char* names[] = {"bounded", "unbounded", "indeterminate"};
    std::printf("verdict=%s iterations=%d residual=%.3e", names[sum.verdict],
                sum.iterations, sum.residual);
    if (sum.verdict == ISAC_BOUNDED) {
      std::printf(" weighted_objective=%.12g dual_objective=%.12g total_power=%.12g",
                  sum.weighted_objective, sum.dual_objective, sum.total_power);
    }
    std::printf("\nbeta=");
    for (int i = 0; i < k; ++i) std::printf("%s%.12g", i ? "," : "", beta[i]);
    std::printf("\n");
    return 0;
  }
  return 0;
}
