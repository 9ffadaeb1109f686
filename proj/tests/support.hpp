#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "isac/ascent.hpp"
#include "isac/gdb.hpp"
#include "isac/generate.hpp"
#include "isac/model.hpp"
#include "isac/rng.hpp"

namespace testing_support {

using namespace isac;

inline CVector random_vector(CounterRng& rng, int m) {
  CVector v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.complex_normal();
  return v;
}

inline CMatrix random_matrix(CounterRng& rng, int rows, int cols) {
  CMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = rng.complex_normal();
  }
  return a;
}

inline CMatrix random_hermitian(CounterRng& rng, int m) {
  const CMatrix a = random_matrix(rng, m, m);
  return 0.5 * (a + a.adjoint());
}

inline CMatrix random_psd(CounterRng& rng, int m, int rank = -1) {
  const CMatrix g = random_matrix(rng, m, rank < 0 ? m : rank);
  return g * g.adjoint();
}

// Scenario with arbitrary grid and shape, targets drawn in [gdb_lo, gdb_hi] dB.
inline Scenario random_scenario(CounterRng& rng, int users, int antennas,
                                int grid_points, double gamma_db_lo = -10.0,
                                double gamma_db_hi = 5.0) {
  Scenario s;
  s.antennas = antennas;
  for (int k = 0; k < users; ++k) {
    s.channels.push_back(random_vector(rng, antennas));
    s.sinr_targets.push_back(db_to_linear(rng.uniform(gamma_db_lo, gamma_db_hi)));
    s.noise_powers.push_back(rng.uniform(0.2, 2.0));
  }
  for (int q = 0; q < grid_points; ++q) {
    s.grid.push_back(rng.uniform(-M_PI / 2.0, M_PI / 2.0));
    s.desired.push_back(rng.uniform(0.5, 1.5));
  }
  s.mse_budget = 1.0;
  return s;
}

// Classical (lambda = 0) optimum of the scenario.
inline InnerSolve classical(const Scenario& s) {
  return inner_value_and_solution(RVector::Zero(s.grid_size()), s);
}

// E* at the classical downlink-beamforming solution.
inline double classical_mse(const Scenario& s) {
  const InnerSolve in = classical(s);
  CMatrix r = CMatrix::Zero(s.antennas, s.antennas);
  for (const auto& v : in.covariances) r += v;
  return beampattern_mse(r, build_sensing_operator(s));
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace testing_support
