// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "isac/io.hpp"
#include "isac/trace.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace isac;
using namespace testing_support;

namespace {

int g_failed = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// P1: 100 single-user instances with B = I against the closed form.
void p1() {
  CounterRng rng(1001, 0);
  const int ms[] = {1, 2, 4, 8};
  double worst_p = 0.0, worst_beta = 0.0, worst_ms = 0.0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    const int m = ms[i % 4];
    Scenario s;
    s.antennas = m;
    s.channels = {random_vector(rng, m)};
    s.sinr_targets = {db_to_linear(rng.uniform(-30.0, 10.0))};
    s.noise_powers = {rng.uniform(0.1, 10.0)};
    s.grid = {0.0};
    s.desired = {1.0};
    s.mse_budget = 1.0;
    const GdbInstance inst = make_gdb_instance(s, CMatrix::Identity(m, m));
    const double h2 = s.channels[0].squaredNorm();
    const double beta_ref = s.sinr_targets[0] / h2;
    const double p_ref = s.sinr_targets[0] * s.noise_powers[0] / h2;

    // Best of three wall times filters scheduler noise.
    double best = 1e300;
    GdbSolution sol;
    FpiOutcome out;
    for (int rep = 0; rep < 3; ++rep) {
      const Stopwatch sw;
      out = fpi_solve(inst, default_beta0(1));
      if (out.status != FpiStatus::kConverged) break;
      sol = recover_primal(out.beta, inst);
      best = std::min(best, sw.seconds());
    }
    if (out.status != FpiStatus::kConverged) {
      ok = false;
      continue;
    }
    worst_beta = std::max(worst_beta, std::abs(out.beta(0) - beta_ref) / beta_ref);
    worst_p = std::max(worst_p, std::abs(sol.powers(0) - p_ref) / p_ref);
    worst_ms = std::max(worst_ms, best * 1e3);
  }
  ok = ok && worst_beta <= 1e-9 && worst_p <= 1e-9 && worst_ms < 1.0;
  report("P1", ok, fmt("100 K=1 instances: max rel err beta %.2e, p %.2e (tol 1e-9); "
                       "max time %.3f ms (limit 1 ms)",
                       worst_beta, worst_p, worst_ms));
}

// P2: strong duality and tight SINR on 200 bounded instances with B = B(lambda).
void p2() {
  CounterRng rng(1002, 0);
  int bounded = 0, attempts = 0;
  double worst_gap = 0.0, worst_sinr = 0.0;
  bool ok = true;
  while (bounded < 200 && attempts < 2000) {
    ++attempts;
    const int k = 1 + static_cast<int>(rng.next_u64() % 4);
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);
    const int q = 1 + static_cast<int>(rng.next_u64() % 12);
    const Scenario s = random_scenario(rng, k, m, q, -20.0, 0.0);
    const auto op = build_sensing_operator(s);
    RVector lambda(q);
    for (int i = 0; i < q; ++i) lambda(i) = rng.uniform(-0.05, 0.05);
    const GdbInstance inst = make_gdb_instance(s, weighting_matrix(lambda, op));
    GdbResult res;
    try {
      res = solve_gdb(inst, default_beta0(k));
    } catch (const Error&) {
      continue;  // recovery refused; not a bounded instance for this check
    }
    if (res.verdict != Boundedness::kBounded) continue;
    ++bounded;
    const GdbSolution& sol = *res.solution;
    worst_gap = std::max(worst_gap, std::abs(sol.dual_objective - sol.weighted_objective) /
                                        (1.0 + std::abs(sol.dual_objective)));
    BeamformingSolution bf;
    bf.covariances = sol.covariances;
    for (int j = 0; j < k; ++j) {
      worst_sinr = std::max(worst_sinr,
                            std::abs(sinr(j, bf, s) - s.sinr_targets[j]) / s.sinr_targets[j]);
    }
  }
  ok = bounded == 200 && worst_gap <= 1e-8 && worst_sinr <= 1e-8;
  report("P2", ok, fmt("%d bounded of %d drawn (K<=4, M<=8, |lambda_q|<=0.05): max duality gap "
                       "%.2e, max SINR slack %.2e (tol 1e-8)",
                       bounded, attempts, worst_gap, worst_sinr));
}

// P3: sensing-operator identity and the MSE against golden-section search.
void p3() {
  CounterRng rng(1003, 0);
  double worst_id = 0.0, worst_mse = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);
    const int q = 1 + static_cast<int>(rng.next_u64() % 40);
    const Scenario s = random_scenario(rng, 1, m, q);
    const auto op = build_sensing_operator(s);
    CMatrix acc = CMatrix::Zero(m, m);
    double scale = 0.0;
    for (int j = 0; j < q; ++j) {
      acc += op.desired[j] * op.matrices[j];
      scale += op.desired[j] * op.steering[j].squaredNorm();
    }
    worst_id = std::max(worst_id, acc.norm() / scale);

    const CMatrix r = random_psd(rng, m) / static_cast<double>(m);
    const double fast = beampattern_mse(r, op);
    const double ref = oracle::min_mse_golden(r, s.grid, s.desired);
    // Single-angle grids have E* = 0; measure against the pattern energy there.
    double energy = 0.0;
    for (int j = 0; j < q; ++j) {
      energy += std::norm((op.steering[j].adjoint() * r * op.steering[j])(0));
    }
    energy /= q;
    const double denom = std::max(std::max(fast, ref), 1e-12 * energy);
    worst_mse = std::max(worst_mse, std::abs(fast - ref) / denom);
  }
  const bool ok = worst_id <= 1e-12 && worst_mse <= 1e-8;
  report("P3", ok, fmt("50 operators (M<=8, Q<=40): max |sum d_q M_q| / scale %.2e (tol 1e-12); "
                       "max MSE rel err vs golden-section %.2e (tol 1e-8)",
                       worst_id, worst_mse));
}

// P4: 50 screened section-V scenarios with (K, M) = (2, 2).
void p4() {
  AscentParams params;
  int converged = 0, active = 0, resamples = 0, accepted = 0;
  double worst_g = 0.0, worst_sinr = 0.0, worst_mse = 0.0, total_time = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const ScreenedScenario sc = generate_screened_scenario(cfg, params);
    resamples += sc.resamples;
    if (!sc.accepted) continue;
    ++accepted;
    const Stopwatch sw;
    const IsacSolution sol = dual_ascent_solve(sc.scenario, params);
    total_time += sw.seconds();
    if (sol.status == AscentStatus::kConverged) ++converged;
    if (sol.lambda.norm() > 0.0) ++active;
    worst_g = std::max(worst_g, sol.grad_norm);
    worst_sinr = std::max(worst_sinr, sol.violations.sinr_violation);
    worst_mse = std::max(worst_mse, sol.violations.mse_violation);
  }
  const double mean = accepted ? total_time / accepted : 0.0;
  const bool ok = accepted == 50 && converged == 50 && worst_g <= 1e-4 && worst_sinr <= 1e-5 &&
                  worst_mse <= 1e-5 && mean < 1.0;
  report("P4", ok, fmt("50 screened (2,2) scenarios (%d resamples, %d with active MSE): "
                       "%d converged, max ||g|| %.2e (tol 1e-4), max SINR viol %.2e, "
                       "max MSE viol %.2e (tol 1e-5), mean time %.4f s (limit 1 s)",
                       resamples, active, converged, worst_g, worst_sinr, worst_mse, mean));
}

// P5: the shipped two-fixed-point fixture.
void p5() {
  const GdbFile f = read_gdb_file(ISAC_FIXTURE_DIR "/two_fixed_point.json");
  const GdbInstance inst = f.instance();
  const bool indefinite =
      Eigen::SelfAdjointEigenSolver<CMatrix>(inst.weighting).eigenvalues().minCoeff() < 0.0;
  const FpiOutcome out = fpi_solve(inst, default_beta0(2));

  const double hi1 = 1.5 * std::max(1.0, out.beta(0));
  const double hi2 = 1.5 * std::max(1.0, out.beta(1));
  const auto roots = oracle::enumerate_fixed_points_2d(inst.weighting, inst.channels,
                                                        inst.sinr_targets, hi1, hi2, 600);
  bool largest = !roots.empty();
  double match = 1e300;
  for (const auto& r : roots) {
    match = std::min(match, (r - out.beta).norm() / r.norm());
    if ((r - out.beta).maxCoeff() > 1e-8 * (1.0 + out.beta.maxCoeff())) largest = false;
  }
  const bool part1 = indefinite && out.status == FpiStatus::kConverged && roots.size() >= 2 &&
                     match <= 1e-8 && largest;

  // Origin-side start: below the smaller fixed point.
  RVector init(2);
  init << 0.01, 0.01;
  const TraceRun proj = run_trace(inst, init, TraceVariant::kProjected);
  const bool part2 = proj.status == FpiStatus::kConverged &&
                     proj.iterates.back().lpNorm<Eigen::Infinity>() <= 1e-12;

  std::string found;
  for (const auto& r : roots) found += fmt(" (%.6f, %.6f)", r(0), r(1));
  report("P5", part1 && part2,
         fmt("indefinite B: %s; %zu fixed points by grid search:%s; FPI from 100*1 -> "
             "(%.6f, %.6f), rel dist %.1e, componentwise largest: %s; projected from "
             "(0.01, 0.01) -> (%.1e, %.1e) after %zu iterates",
             indefinite ? "yes" : "no", roots.size(), found.c_str(), out.beta(0), out.beta(1),
             match, largest ? "yes" : "no", proj.iterates.back()(0), proj.iterates.back()(1),
             proj.iterates.size() - 1));
}

// P6: eta = 1e6 stops at lambda = 0 after one iteration.
void p6() {
  bool ok = true;
  double worst = 0.0;
  int worst_iter = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.users = 1 + static_cast<int>(seed % 4);
    cfg.antennas = 2 + static_cast<int>(seed % 3);
    Scenario s = generate_scenario(cfg, 0);
    s.mse_budget = 1e6;
    const IsacSolution sol = dual_ascent_solve(s);
    const InnerSolve in = classical(s);
    const double err = std::abs(sol.total_power - in.value) / std::abs(in.value);
    worst = std::max(worst, err);
    worst_iter = std::max(worst_iter, sol.outer_iterations);
    ok = ok && sol.status == AscentStatus::kConverged && sol.outer_iterations == 1 &&
         sol.lambda.norm() == 0.0 && err <= 1e-10;
  }
  report("P6", ok, fmt("20 scenarios with eta = 1e6: max outer iterations %d, lambda = 0, "
                       "max rel diff to lambda=0 inner value %.2e (tol 1e-10)",
                       worst_iter, worst));
}

// P7: monotonicity of the interference map on 500 evaluable pairs.
void p7() {
  CounterRng rng(1007, 0);
  int pairs = 0, draws = 0;
  double worst = 0.0;
  while (pairs < 500 && draws < 100000) {
    ++draws;
    const int k = 1 + static_cast<int>(rng.next_u64() % 4);
    const int m = 1 + static_cast<int>(rng.next_u64() % 5);
    GdbInstance inst;
    inst.weighting = random_hermitian(rng, m);
    for (int j = 0; j < k; ++j) {
      inst.channels.push_back(random_vector(rng, m));
      inst.sinr_targets.push_back(db_to_linear(rng.uniform(-10.0, 10.0)));
      inst.noise_powers.push_back(1.0);
    }
    RVector beta(k), bump(k);
    for (int j = 0; j < k; ++j) {
      beta(j) = rng.uniform(0.0, 4.0);
      bump(j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
    }
    if (oracle::min_eig_c(beta, inst.weighting, inst.channels) < 0.0) continue;
    const auto lo = interference_map(beta, inst);
    const auto hi = interference_map(beta + bump, inst);
    if (!lo || !hi) continue;
    ++pairs;
    for (int j = 0; j < k; ++j) {
      const double slack = 1e-12 * std::max(1.0, std::abs((*hi)(j)));
      worst = std::max(worst, ((*lo)(j) - (*hi)(j)) / slack);
    }
  }
  const bool ok = pairs == 500 && worst <= 1.0;
  report("P7", ok, fmt("%d evaluable pairs (of %d draws) with C(beta) PSD: max violation "
                       "%.2f x slack (slack 1e-12 * max(1, |I_k(beta')|))",
                       pairs, draws, std::max(worst, 0.0)));
}

}  // namespace

int main() {
  p1();
  p2();
  p3();
  p4();
  p5();
  p6();
  p7();
  std::printf("%s: %d of 7 criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
