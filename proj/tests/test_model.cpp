#include "doctest.h"

#include <Eigen/SVD>

#include "oracles.hpp"
#include "support.hpp"

using namespace isac;
using namespace testing_support;

namespace {

const Complex kI(0.0, 1.0);

// Scalar operator: M = 1 with a == 1 needs theta = 0 on every grid point.
SensingOperator scalar_op(std::vector<double> d) {
  return build_sensing_operator(std::vector<double>(d.size(), 0.0), d, 1);
}

}  // namespace

TEST_CASE("steering vector entries") {
  const CVector a0 = steering_vector(0.0, 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a0(i) - Complex(1.0)) < 1e-15);

  const CVector a1 = steering_vector(M_PI / 2.0, 2);
  CHECK(std::abs(a1(0) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(a1(1) - Complex(-1.0)) < 1e-15);

  const CVector a2 = steering_vector(M_PI / 6.0, 2);
  CHECK(std::abs(a2(1) - kI) < 1e-15);

  const CVector a3 = steering_vector(0.7, 8);
  CHECK(a3(0) == Complex(1.0));
  for (int i = 0; i < 8; ++i) CHECK(std::abs(std::abs(a3(i)) - 1.0) < 1e-15);
}

TEST_CASE("sector grid is broadside centered with endpoints") {
  const auto g = sector_grid(36, 2.0 * M_PI / 3.0);
  REQUIRE(g.size() == 36);
  CHECK(g.front() == doctest::Approx(-M_PI / 3.0).epsilon(1e-14));
  CHECK(g.back() == doctest::Approx(M_PI / 3.0).epsilon(1e-14));
  CHECK(g[1] - g[0] == doctest::Approx(g[35] - g[34]).epsilon(1e-12));
  const auto one = sector_grid(1, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0.0);
}

TEST_CASE("sensing operator single angle cancels") {
  const auto op = build_sensing_operator({0.4}, {1.3}, 3);
  REQUIRE(op.grid_size() == 1);
  CHECK(op.matrices[0].norm() < 1e-14);
}

TEST_CASE("sensing operator scalar two-point example is zero") {
  const auto op = scalar_op({1.0, 1.0});
  CHECK(std::abs(op.matrices[0](0, 0)) < 1e-15);
  CHECK(std::abs(op.matrices[1](0, 0)) < 1e-15);
}

TEST_CASE("sensing operator matrices are Hermitian and weighted sum vanishes") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Scenario s = random_scenario(rng, 1, 1 + trial % 6, 2 + 3 * trial);
    const auto op = build_sensing_operator(s);
    CMatrix acc = CMatrix::Zero(s.antennas, s.antennas);
    double scale = 0.0;
    for (int q = 0; q < op.grid_size(); ++q) {
      CHECK((op.matrices[q] - op.matrices[q].adjoint()).norm() == 0.0);
      acc += op.desired[q] * op.matrices[q];
      scale += op.desired[q] * op.steering[q].squaredNorm();
    }
    CHECK(acc.norm() <= 1e-12 * scale);
  }
}

TEST_CASE("sensing operator rejects bad input") {
  CHECK_THROWS_AS(build_sensing_operator({}, {}, 2), Error);
  CHECK_THROWS_AS(build_sensing_operator({0.0}, {-1.0}, 2), Error);
  CHECK_THROWS_AS(build_sensing_operator({0.0, 0.1}, {1.0}, 2), Error);
  CHECK_THROWS_AS(build_sensing_operator({0.0}, {1.0}, 0), Error);
  try {
    build_sensing_operator({}, {}, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidInput);
  }
}

TEST_CASE("optimal scaling examples") {
  const auto op = scalar_op({1.0, 2.0});
  CHECK(optimal_scaling(CMatrix::Zero(1, 1), op) == 0.0);
  CHECK(optimal_scaling(CMatrix::Constant(1, 1, 3.0), op) ==
        doctest::Approx(1.8).epsilon(1e-15));

  // a^H R a = d_q on every grid point gives alpha* = 1.
  const auto op1 = scalar_op({0.7, 0.7, 0.7});
  CHECK(optimal_scaling(CMatrix::Constant(1, 1, 0.7), op1) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("optimal scaling is nonnegative on PSD input") {
  CounterRng rng(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario s = random_scenario(rng, 1, 3, 7);
    CHECK(optimal_scaling(random_psd(rng, 3), build_sensing_operator(s)) >= 0.0);
  }
}

TEST_CASE("beampattern mse zero cases") {
  const auto op = scalar_op({0.7, 0.7});
  CHECK(beampattern_mse(CMatrix::Zero(1, 1), op) == 0.0);
  CHECK(beampattern_mse(CMatrix::Constant(1, 1, 0.7), op) < 1e-30);

  // R = a a^H with uniform d on a grid at a single angle repeated.
  const std::vector<double> grid{0.3, 0.3, 0.3};
  const auto op2 = build_sensing_operator(grid, {1.0, 1.0, 1.0}, 2);
  const CVector a = steering_vector(0.3, 2);
  CHECK(beampattern_mse(a * a.adjoint(), op2) < 1e-28);
}

TEST_CASE("beampattern mse equals the literal minimum over the scaling") {
  CounterRng rng(13, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = trial < 10 ? 2 : 1 + trial % 5;
    const int q = trial < 10 ? 4 : 2 + trial;
    const Scenario s = random_scenario(rng, 1, m, q);
    const auto op = build_sensing_operator(s);
    const CMatrix r = random_psd(rng, m) * 0.1;
    const double fast = beampattern_mse(r, op);
    const double alpha = optimal_scaling(r, op);
    CHECK(std::abs(fast - oracle::mse_at(alpha, r, s.grid, s.desired)) <=
          1e-10 * std::max(fast, 1e-300) + 1e-22);
    const double golden = oracle::min_mse_golden(r, s.grid, s.desired);
    CHECK(std::abs(fast - golden) <= 1e-8 * std::max(fast, golden) + 1e-22);
  }
}

TEST_CASE("beampattern mse is invariant along the sensing null space") {
  CounterRng rng(14, 0);
  const int m = 4;
  const Scenario s = random_scenario(rng, 1, m, 5);
  const auto op = build_sensing_operator(s);

  // Real basis of the Hermitian matrices and the matrix of the sensing map.
  std::vector<CMatrix> basis;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      CMatrix e = CMatrix::Zero(m, m);
      if (i == j) {
        e(i, i) = 1.0;
        basis.push_back(e);
        continue;
      }
      e(i, j) = e(j, i) = 1.0;
      basis.push_back(e);
      CMatrix f = CMatrix::Zero(m, m);
      f(i, j) = kI;
      f(j, i) = -kI;
      basis.push_back(f);
    }
  }
  Eigen::MatrixXd map(op.grid_size(), static_cast<int>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    map.col(static_cast<int>(b)) = sensing_map(basis[b], op);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
  const int rank = static_cast<int>(svd.rank());
  REQUIRE(rank <= op.grid_size());

  const CMatrix r = random_psd(rng, m);
  const double base = beampattern_mse(r, op);
  for (int col = rank; col < static_cast<int>(basis.size()); ++col) {
    CMatrix n = CMatrix::Zero(m, m);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      n += svd.matrixV()(static_cast<int>(b), col) * basis[b];
    }
    CHECK(sensing_map(n, op).norm() < 1e-12);
    for (double t : {-3.0, 0.5, 10.0}) {
      CHECK(beampattern_mse(r + t * n, op) ==
            doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("sensing map examples") {
  const auto op = scalar_op({1.0, 1.0});
  const RVector v = sensing_map(CMatrix::Identity(1, 1), op);
  CHECK(v.size() == 2);
  CHECK(v.norm() < 1e-15);

  CounterRng rng(15, 0);
  const Scenario s = random_scenario(rng, 1, 3, 6);
  const auto op3 = build_sensing_operator(s);
  CHECK(sensing_map(CMatrix::Zero(3, 3), op3).norm() == 0.0);
  const CMatrix r = random_psd(rng, 3);
  const RVector m = sensing_map(r, op3);
  for (int q = 0; q < 6; ++q) {
    CHECK(m(q) == doctest::Approx((op3.matrices[q].adjoint() * r).trace().real()));
  }
  CHECK_THROWS_AS(sensing_map(CMatrix::Zero(2, 2), op3), Error);
}

TEST_CASE("inner product rejects complex residue") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 1) = kI;
  CHECK_THROWS_AS(inner(a, b), Error);
  CHECK(inner(a, a) == 1.0);
}

TEST_CASE("sinr examples") {
  CounterRng rng(16, 0);
  Scenario s = random_scenario(rng, 1, 3, 4);
  s.noise_powers = {1.0};
  const CVector h = s.channels[0];
  BeamformingSolution sol;
  sol.covariances = {CMatrix::Zero(3, 3)};
  CHECK(sinr(0, sol, s) == 0.0);
  const double p = 0.37;
  sol.covariances = {p * h * h.adjoint() / h.squaredNorm()};
  CHECK(sinr(0, sol, s) == doctest::Approx(p * h.squaredNorm()).epsilon(1e-13));
  CHECK_THROWS_AS(sinr(1, sol, s), Error);
  CHECK_THROWS_AS(sinr(-1, sol, s), Error);

  Scenario o = random_scenario(rng, 2, 2, 3);
  o.channels[0] = CVector::Zero(2);
  o.channels[0](0) = Complex(1.5, -0.5);
  o.channels[1] = CVector::Zero(2);
  o.channels[1](1) = Complex(0.2, 0.9);
  const double p1 = 2.0, p2 = 0.3;
  BeamformingSolution os;
  for (int k = 0; k < 2; ++k) {
    const CVector& hk = o.channels[k];
    os.covariances.push_back((k == 0 ? p1 : p2) * hk * hk.adjoint() / hk.squaredNorm());
  }
  CHECK(sinr(0, os, o) == doctest::Approx(p1 * o.channels[0].squaredNorm() / o.noise_powers[0]));
  CHECK(sinr(1, os, o) == doctest::Approx(p2 * o.channels[1].squaredNorm() / o.noise_powers[1]));
}

TEST_CASE("sinr is scale covariant") {
  CounterRng rng(17, 0);
  for (int trial = 0; trial < 10; ++trial) {
    Scenario s = random_scenario(rng, 3, 4, 3);
    BeamformingSolution sol;
    for (int k = 0; k < 3; ++k) sol.covariances.push_back(random_psd(rng, 4, 1));
    const double c = rng.uniform(0.01, 100.0);
    Scenario scaled = s;
    BeamformingSolution scaled_sol = sol;
    for (auto& n : scaled.noise_powers) n *= c;
    for (auto& v : scaled_sol.covariances) v *= c;
    for (int k = 0; k < 3; ++k) {
      CHECK(sinr(k, scaled_sol, scaled) ==
            doctest::Approx(sinr(k, sol, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("check solution reports relative shortfalls") {
  CounterRng rng(18, 0);
  Scenario s = random_scenario(rng, 2, 2, 4);
  BeamformingSolution zero;
  zero.covariances = {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)};
  const ViolationReport z = check_solution(s, zero);
  CHECK(z.sinr_violation == 1.0);
  CHECK(z.mse_violation == 0.0);
  CHECK(z.objective == 0.0);

  s.mse_budget = 1e6;
  const InnerSolve in = classical(s);
  BeamformingSolution opt;
  opt.covariances = in.covariances;
  const ViolationReport r = check_solution(s, opt, 1e-10);
  CHECK(r.sinr_violation == 0.0);
  CHECK(r.mse_violation == 0.0);
  CHECK(r.objective == doctest::Approx(total_power(in.covariances)));

  // A budget below the achieved MSE reports the relative excess.
  const double e = beampattern_mse(opt.total_covariance(), build_sensing_operator(s));
  s.mse_budget = e / 2.0;
  CHECK(check_solution(s, opt).mse_violation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("check solution on the single-user closed form") {
  CounterRng rng(19, 0);
  Scenario s = random_scenario(rng, 1, 4, 5);
  s.mse_budget = 1e9;
  const CVector& h = s.channels[0];
  const double p = s.sinr_targets[0] * s.noise_powers[0] / h.squaredNorm();
  BeamformingSolution sol;
  sol.covariances = {p * h * h.adjoint() / h.squaredNorm()};
  const ViolationReport r = check_solution(s, sol);
  CHECK(r.sinr_violation <= 1e-10);
  CHECK(r.mse_violation <= 1e-10);
}

TEST_CASE("scenario validation") {
  CounterRng rng(20, 0);
  Scenario s = random_scenario(rng, 2, 2, 3);
  CHECK_NOTHROW(s.validate());
  Scenario bad = s;
  bad.sinr_targets.pop_back();
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.channels[1] = CVector::Zero(3);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.noise_powers[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.mse_budget = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
