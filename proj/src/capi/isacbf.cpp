#include "isacbf.h"

#include <chrono>
#include <exception>
#include <string>

#include "isac/ascent.hpp"
#include "isac/bench.hpp"
#include "isac/generate.hpp"
#include "isac/io.hpp"
#include "isac/trace.hpp"

struct isac_scenario {
  isac::Scenario value;
};

struct isac_solution {
  isac::Scenario scenario;
  isac::IsacSolution value;
  double time_s = 0.0;
};

struct isac_gdb {
  isac::GdbFile file;
};

namespace {

thread_local std::string g_last_error;

isac_status to_status(isac::ErrorCode code) {
  using isac::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidInput: return ISAC_E_INVALID_INPUT;
    case ErrorCode::kDimensionMismatch: return ISAC_E_DIMENSION_MISMATCH;
    case ErrorCode::kIndexOutOfRange: return ISAC_E_INDEX_OUT_OF_RANGE;
    case ErrorCode::kDegenerateRecovery: return ISAC_E_DEGENERATE_RECOVERY;
    case ErrorCode::kRecoveryFailure: return ISAC_E_RECOVERY_FAILURE;
    case ErrorCode::kInfeasibleScenario: return ISAC_E_INFEASIBLE;
    case ErrorCode::kIo: return ISAC_E_IO;
    case ErrorCode::kParse: return ISAC_E_PARSE;
    case ErrorCode::kInternal: return ISAC_E_INTERNAL;
  }
  return ISAC_E_INTERNAL;
}

template <typename F>
isac_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return ISAC_OK;
  } catch (const isac::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ISAC_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return ISAC_E_INTERNAL;
  }
}

isac_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return ISAC_E_NULL_ARGUMENT;
}

isac_status too_small(std::size_t need) {
  g_last_error = "buffer too small, need " + std::to_string(need);
  return ISAC_E_BUFFER_TOO_SMALL;
}

isac::GenConfig to_cpp(const isac_gen_config& c) {
  isac::GenConfig g;
  g.users = c.users;
  g.antennas = c.antennas;
  g.grid_size = c.grid_size;
  g.sector_deg = c.sector_deg;
  g.eta_min = c.eta_min;
  g.eta_max = c.eta_max;
  g.gamma_db_min = c.gamma_db_min;
  g.gamma_db_max = c.gamma_db_max;
  g.desired_min = c.desired_min;
  g.desired_max = c.desired_max;
  g.noise_power = c.noise_power;
  g.seed = c.seed;
  return g;
}

isac::AscentParams to_cpp(const isac_ascent_params* p) {
  isac::AscentParams a;
  if (p == nullptr) return a;
  a.alpha0 = p->alpha0;
  a.rho = p->rho;
  a.epsilon = p->epsilon;
  a.relative_epsilon = p->relative_epsilon;
  a.max_outer = p->max_outer;
  a.alpha_min = p->alpha_min;
  a.alpha_max = p->alpha_max;
  a.max_backtracks = p->max_backtracks;
  a.warm_start = p->warm_start != 0;
  a.fpi.tol = p->fpi_tol;
  a.fpi.max_iter = p->fpi_max_iter;
  a.fpi.cap = p->fpi_cap;
  return a;
}

isac_verdict to_c(isac::Boundedness b) {
  switch (b) {
    case isac::Boundedness::kBounded: return ISAC_BOUNDED;
    case isac::Boundedness::kUnbounded: return ISAC_UNBOUNDED;
    case isac::Boundedness::kIndeterminate: return ISAC_INDETERMINATE;
  }
  return ISAC_INDETERMINATE;
}

isac_status copy_vector(const isac::RVector& v, double* out, std::size_t len) {
  if (out == nullptr) return null_arg("out");
  const auto n = static_cast<std::size_t>(v.size());
  if (len < n) return too_small(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v(static_cast<Eigen::Index>(i));
  return ISAC_OK;
}

}  // namespace

extern "C" {

const char* isac_status_string(isac_status status) {
  switch (status) {
    case ISAC_OK: return "ok";
    case ISAC_E_INVALID_INPUT: return "invalid input";
    case ISAC_E_DIMENSION_MISMATCH: return "dimension mismatch";
    case ISAC_E_INDEX_OUT_OF_RANGE: return "index out of range";
    case ISAC_E_DEGENERATE_RECOVERY: return "degenerate primal recovery";
    case ISAC_E_RECOVERY_FAILURE: return "power allocation failure";
    case ISAC_E_INFEASIBLE: return "infeasible scenario";
    case ISAC_E_IO: return "i/o error";
    case ISAC_E_PARSE: return "parse error";
    case ISAC_E_INTERNAL: return "internal error";
    case ISAC_E_NULL_ARGUMENT: return "null argument";
    case ISAC_E_BUFFER_TOO_SMALL: return "buffer too small";
  }
  return "unknown status";
}

const char* isac_last_error(void) { return g_last_error.c_str(); }

const char* isac_version(void) { return "1.0.0"; }

void isac_gen_config_default(isac_gen_config* cfg) {
  if (cfg == nullptr) return;
  const isac::GenConfig g;
  *cfg = isac_gen_config{g.users,        g.antennas,     g.grid_size,
                         g.sector_deg,   g.eta_min,      g.eta_max,
                         g.gamma_db_min, g.gamma_db_max, g.desired_min,
                         g.desired_max,  g.noise_power,  g.seed};
}

isac_status isac_scenario_generate(const isac_gen_config* cfg, int screen,
                                   isac_scenario** out, int* resamples) {
  if (cfg == nullptr) return null_arg("cfg");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    const auto gen = to_cpp(*cfg);
    auto handle = std::make_unique<isac_scenario>();
    int count = 0;
    if (screen != 0) {
      auto screened = isac::generate_screened_scenario(gen);
      if (!screened.accepted) {
        throw isac::Error(isac::ErrorCode::kInfeasibleScenario,
                          "no feasible draw within the resample budget");
      }
      handle->value = std::move(screened.scenario);
      count = screened.resamples;
    } else {
      handle->value = isac::generate_scenario(gen);
    }
    if (resamples != nullptr) *resamples = count;
    *out = handle.release();
  });
}

isac_status isac_scenario_load(const char* path, isac_scenario** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    auto handle = std::make_unique<isac_scenario>();
    handle->value = isac::read_scenario(path);
    *out = handle.release();
  });
}

isac_status isac_scenario_save(const isac_scenario* s, const char* path) {
  if (s == nullptr) return null_arg("scenario");
  if (path == nullptr) return null_arg("path");
  return guarded([&] { isac::write_scenario(path, s->value); });
}

isac_status isac_scenario_dims(const isac_scenario* s, int* antennas,
                               int* users, int* grid_size) {
  if (s == nullptr) return null_arg("scenario");
  if (antennas) *antennas = s->value.antennas;
  if (users) *users = s->value.users();
  if (grid_size) *grid_size = s->value.grid_size();
  return ISAC_OK;
}

isac_status isac_scenario_set_eta(isac_scenario* s, double eta) {
  if (s == nullptr) return null_arg("scenario");
  if (!(eta > 0.0)) {
    g_last_error = "eta must be > 0";
    return ISAC_E_INVALID_INPUT;
  }
  s->value.mse_budget = eta;
  return ISAC_OK;
}

void isac_scenario_free(isac_scenario* s) { delete s; }

void isac_ascent_params_default(isac_ascent_params* p) {
  if (p == nullptr) return;
  const isac::AscentParams a;
  *p = isac_ascent_params{a.alpha0,     a.rho,        a.epsilon,
                          a.relative_epsilon,          a.max_outer,
                          a.alpha_min,  a.alpha_max,  a.max_backtracks,
                          a.warm_start ? 1 : 0,       a.fpi.tol,
                          a.fpi.max_iter,             a.fpi.cap};
}

isac_status isac_solve(const isac_scenario* s, const isac_ascent_params* params,
                       isac_solution** out) {
  if (s == nullptr) return null_arg("scenario");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    auto handle = std::make_unique<isac_solution>();
    handle->scenario = s->value;
    const auto t0 = std::chrono::steady_clock::now();
    handle->value = isac::dual_ascent_solve(s->value, to_cpp(params));
    handle->time_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    *out = handle.release();
  });
}

isac_status isac_solution_summary_get(const isac_solution* sol,
                                      isac_solution_summary* out) {
  if (sol == nullptr) return null_arg("solution");
  if (out == nullptr) return null_arg("out");
  const auto& v = sol->value;
  isac_ascent_status st = ISAC_ASCENT_MAX_OUTER;
  switch (v.status) {
    case isac::AscentStatus::kConverged: st = ISAC_ASCENT_CONVERGED; break;
    case isac::AscentStatus::kMaxOuter: st = ISAC_ASCENT_MAX_OUTER; break;
    case isac::AscentStatus::kStalled: st = ISAC_ASCENT_STALLED; break;
  }
  *out = isac_solution_summary{st,
                               v.total_power,
                               v.dual_value,
                               v.inner_value,
                               v.grad_norm,
                               v.outer_iterations,
                               v.violations.sinr_violation,
                               v.violations.mse_violation,
                               sol->time_s};
  return ISAC_OK;
}

isac_status isac_solution_powers(const isac_solution* sol, double* out,
                                 size_t len) {
  if (sol == nullptr) return null_arg("solution");
  return copy_vector(sol->value.powers, out, len);
}

isac_status isac_solution_lambda(const isac_solution* sol, double* out,
                                 size_t len) {
  if (sol == nullptr) return null_arg("solution");
  return copy_vector(sol->value.lambda, out, len);
}

isac_status isac_solution_covariance(const isac_solution* sol, int user,
                                     double* out, size_t len) {
  if (sol == nullptr) return null_arg("solution");
  if (out == nullptr) return null_arg("out");
  const auto& cov = sol->value.covariances;
  if (user < 0 || user >= static_cast<int>(cov.size())) {
    g_last_error = "user index out of range";
    return ISAC_E_INDEX_OUT_OF_RANGE;
  }
  const auto& v = cov[user];
  const auto need = static_cast<std::size_t>(2 * v.rows() * v.cols());
  if (len < need) return too_small(need);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      out[i++] = v(r, c).real();
      out[i++] = v(r, c).imag();
    }
  }
  return ISAC_OK;
}

isac_status isac_solution_save(const isac_solution* sol, const char* path) {
  if (sol == nullptr) return null_arg("solution");
  if (path == nullptr) return null_arg("path");
  return guarded([&] {
    isac::write_solution(
        path, isac::make_solution_record(sol->scenario, sol->value, sol->time_s));
  });
}

isac_status isac_solution_write_log(const isac_solution* sol,
                                    const char* csv_path) {
  if (sol == nullptr) return null_arg("solution");
  if (csv_path == nullptr) return null_arg("csv_path");
  return guarded([&] { isac::write_ascent_log_csv(csv_path, sol->value.log); });
}

void isac_solution_free(isac_solution* sol) { delete sol; }

isac_status isac_gdb_load(const char* path, isac_gdb** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    auto handle = std::make_unique<isac_gdb>();
    handle->file = isac::read_gdb_file(path);
    handle->file.instance();  // validates B
    *out = handle.release();
  });
}

isac_status isac_gdb_from_scenario(const isac_scenario* s, const double* lambda,
                                   size_t len, isac_gdb** out) {
  if (s == nullptr) return null_arg("scenario");
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    const int q = s->value.grid_size();
    isac::RVector lam = isac::RVector::Zero(q);
    if (lambda != nullptr) {
      if (len != static_cast<std::size_t>(q)) {
        throw isac::Error(isac::ErrorCode::kDimensionMismatch,
                          "lambda length must equal Q");
      }
      for (int i = 0; i < q; ++i) lam(i) = lambda[i];
    }
    auto handle = std::make_unique<isac_gdb>();
    handle->file.scenario = s->value;
    handle->file.lambda = lam;
    handle->file.weighting = isac::weighting_matrix(
        lam, isac::build_sensing_operator(s->value));
    *out = handle.release();
  });
}

isac_status isac_gdb_save(const isac_gdb* g, const char* path) {
  if (g == nullptr) return null_arg("gdb");
  if (path == nullptr) return null_arg("path");
  return guarded([&] { isac::write_gdb_file(path, g->file); });
}

isac_status isac_gdb_users(const isac_gdb* g, int* users) {
  if (g == nullptr) return null_arg("gdb");
  if (users == nullptr) return null_arg("users");
  *users = g->file.scenario.users();
  return ISAC_OK;
}

isac_status isac_gdb_solve(const isac_gdb* g, const double* beta0, double tol,
                           int max_iter, isac_gdb_summary* summary,
                           double* beta_out) {
  if (g == nullptr) return null_arg("gdb");
  if (summary == nullptr) return null_arg("summary");
  return guarded([&] {
    const auto inst = g->file.instance();
    const int k = inst.users();
    isac::RVector b0 = isac::default_beta0(k);
    if (beta0 != nullptr) b0 = Eigen::Map<const isac::RVector>(beta0, k);
    isac::FpiParams params;
    if (tol > 0.0) params.tol = tol;
    if (max_iter > 0) params.max_iter = max_iter;
    params.record_trace = false;
    const auto result = isac::solve_gdb(inst, b0, params);
    *summary = isac_gdb_summary{to_c(result.verdict), result.fpi.iterations,
                                result.fpi.residual, 0.0, 0.0, 0.0};
    if (result.solution) {
      summary->weighted_objective = result.solution->weighted_objective;
      summary->total_power = result.solution->total_power;
      summary->dual_objective = result.solution->dual_objective;
    }
    if (beta_out != nullptr) {
      for (int i = 0; i < k; ++i) beta_out[i] = result.fpi.beta(i);
    }
  });
}

isac_status isac_gdb_emit_trace(const isac_gdb* g, const double* inits,
                                size_t n_inits, int projected,
                                const char* out_dir) {
  if (g == nullptr) return null_arg("gdb");
  if (inits == nullptr && n_inits > 0) return null_arg("inits");
  if (out_dir == nullptr) return null_arg("out_dir");
  return guarded([&] {
    const auto inst = g->file.instance();
    const int k = inst.users();
    std::vector<isac::RVector> starts;
    for (std::size_t i = 0; i < n_inits; ++i) {
      starts.emplace_back(Eigen::Map<const isac::RVector>(inits + i * k, k));
    }
    isac::emit_fpi_trace(inst, starts,
                         projected != 0 ? isac::TraceVariant::kProjected
                                        : isac::TraceVariant::kPlain,
                         out_dir);
  });
}

void isac_gdb_free(isac_gdb* g) { delete g; }

isac_status isac_bench_run(const isac_bench_config* cfg, const char* report_csv,
                           const char* instances_csv) {
  if (cfg == nullptr) return null_arg("cfg");
  if (report_csv == nullptr) return null_arg("report_csv");
  if (cfg->cells == nullptr && cfg->n_cells > 0) return null_arg("cells");
  return guarded([&] {
    isac::BenchmarkConfig bc;
    for (std::size_t i = 0; i < cfg->n_cells; ++i) {
      bc.cells.emplace_back(cfg->cells[2 * i], cfg->cells[2 * i + 1]);
    }
    bc.seeds = cfg->seeds;
    bc.first_seed = cfg->first_seed;
    bc.methods.clear();
    if (cfg->methods & ISAC_METHOD_DIRECT_SDP) bc.methods.push_back(isac::Method::kDirectSdp);
    if (cfg->methods & ISAC_METHOD_DUAL_SDP) bc.methods.push_back(isac::Method::kDualSdp);
    if (cfg->methods & ISAC_METHOD_DUAL_FPI) bc.methods.push_back(isac::Method::kDualFpi);
    if (bc.methods.empty()) {
      throw isac::Error(isac::ErrorCode::kInvalidInput, "no methods selected");
    }
    bc.jobs = cfg->jobs;
    bc.params = to_cpp(cfg->params);
    if (cfg->oracle_command != nullptr && cfg->oracle_command[0] != '\0') {
      bc.oracle = isac::OracleClient{
          cfg->oracle_command,
          cfg->work_dir != nullptr ? cfg->work_dir : "oracle_work"};
    }
    const auto report = isac::run_benchmark(bc);
    isac::write_report_csv(report_csv, report);
    if (instances_csv != nullptr) isac::write_instances_csv(instances_csv, report);
  });
}

}  // extern "C"
