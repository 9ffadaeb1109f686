#include "isac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace isac {

void Scenario::validate() const {
  if (antennas < 1) throw Error(ErrorCode::kInvalidInput, "M must be >= 1");
  const auto k = channels.size();
  if (k == 0) throw Error(ErrorCode::kInvalidInput, "K must be >= 1");
  if (sinr_targets.size() != k || noise_powers.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gamma/sigma2 lengths must equal K");
  }
  if (grid.empty()) throw Error(ErrorCode::kInvalidInput, "Q must be >= 1");
  if (desired.size() != grid.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta and d lengths differ");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (channels[i].size() != antennas) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "channel " + std::to_string(i) + " has wrong length");
    }
    if (channels[i].squaredNorm() == 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "channel " + std::to_string(i) + " is zero");
    }
    if (!(sinr_targets[i] > 0.0) || !(noise_powers[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "gamma and sigma2 must be > 0");
    }
  }
  if (std::any_of(desired.begin(), desired.end(),
                  [](double d) { return !(d > 0.0); })) {
    throw Error(ErrorCode::kInvalidInput, "desired pattern must be > 0");
  }
  if (!(mse_budget > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "eta must be > 0");
  }
}

CVector steering_vector(double theta, int antennas) {
  if (antennas < 1) {
    throw Error(ErrorCode::kInvalidInput, "steering_vector: M must be >= 1");
  }
  CVector a(antennas);
  const double phase = std::numbers::pi * std::sin(theta);
  for (int m = 0; m < antennas; ++m) a(m) = std::polar(1.0, phase * m);
  return a;
}

std::vector<double> sector_grid(int points, double sector_rad) {
  if (points < 1) throw Error(ErrorCode::kInvalidInput, "grid needs Q >= 1");
  std::vector<double> grid(points, 0.0);
  if (points == 1) return grid;
  const double start = -0.5 * sector_rad;
  const double step = sector_rad / (points - 1);
  for (int q = 0; q < points; ++q) grid[q] = start + step * q;
  return grid;
}

SensingOperator build_sensing_operator(const std::vector<double>& grid,
                                       const std::vector<double>& desired,
                                       int antennas) {
  if (grid.empty()) {
    throw Error(ErrorCode::kInvalidInput, "sensing operator: empty grid");
  }
  if (grid.size() != desired.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sensing operator: grid/desired length mismatch");
  }
  SensingOperator op;
  op.desired = desired;
  op.steering.reserve(grid.size());
  CMatrix weighted = CMatrix::Zero(antennas, antennas);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    if (!(desired[q] > 0.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "sensing operator: desired pattern must be > 0");
    }
    op.steering.push_back(steering_vector(grid[q], antennas));
    const CVector& a = op.steering.back();
    weighted += desired[q] * (a * a.adjoint());
    op.desired_norm += desired[q] * desired[q];
  }
  weighted /= op.desired_norm;
  op.matrices.reserve(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const CVector& a = op.steering[q];
    op.matrices.push_back(
        hermitian_part(desired[q] * weighted - a * a.adjoint()));
  }
  return op;
}

double optimal_scaling(const CMatrix& r, const SensingOperator& op) {
  double acc = 0.0;
  for (int q = 0; q < op.grid_size(); ++q) {
    const CVector& a = op.steering[q];
    acc += op.desired[q] * (a.adjoint() * r * a)(0).real();
  }
  return acc / op.desired_norm;
}

RVector sensing_map(const CMatrix& v, const SensingOperator& op) {
  const int m = op.antennas();
  if (v.rows() != m || v.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "sensing_map: V is not MxM");
  }
  RVector out(op.grid_size());
  for (int q = 0; q < op.grid_size(); ++q) out(q) = inner(v, op.matrices[q]);
  return out;
}

double beampattern_mse(const CMatrix& r, const SensingOperator& op) {
  return sensing_map(r, op).squaredNorm() / op.grid_size();
}

CMatrix BeamformingSolution::total_covariance() const {
  if (covariances.empty()) return {};
  CMatrix sum = CMatrix::Zero(covariances.front().rows(),
                              covariances.front().cols());
  for (const auto& v : covariances) sum += v;
  return sum;
}

double total_power(const std::vector<CMatrix>& covariances) {
  double acc = 0.0;
  for (const auto& v : covariances) acc += v.trace().real();
  return acc;
}

namespace {

double quad(const CVector& h, const CMatrix& v) {
  return (h.adjoint() * v * h)(0).real();
}

}  // namespace

double sinr(int user, const BeamformingSolution& solution,
            const Scenario& scenario) {
  const int k = scenario.users();
  if (user < 0 || user >= k) {
    throw Error(ErrorCode::kIndexOutOfRange, "sinr: user index out of range");
  }
  if (static_cast<int>(solution.covariances.size()) != k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sinr: solution does not have K covariances");
  }
  const CVector& h = scenario.channels[user];
  const double signal = quad(h, solution.covariances[user]);
  double interference = 0.0;
  for (int j = 0; j < k; ++j) {
    if (j != user) interference += quad(h, solution.covariances[j]);
  }
  return std::max(0.0, signal) /
         (std::max(0.0, interference) + scenario.noise_powers[user]);
}

ViolationReport check_solution(const Scenario& scenario,
                               const BeamformingSolution& solution,
                               double tol) {
  ViolationReport report;
  report.objective = total_power(solution.covariances);
  for (int k = 0; k < scenario.users(); ++k) {
    const double target = scenario.sinr_targets[k];
    const double shortfall =
        std::max(0.0, target - sinr(k, solution, scenario)) / target;
    report.sinr_violation = std::max(report.sinr_violation, shortfall);
  }
  const auto op = build_sensing_operator(scenario);
  const double mse = beampattern_mse(solution.total_covariance(), op);
  report.mse_violation =
      std::max(0.0, mse - scenario.mse_budget) / scenario.mse_budget;
  if (report.sinr_violation <= tol) report.sinr_violation = 0.0;
  if (report.mse_violation <= tol) report.mse_violation = 0.0;
  return report;
}

}  // namespace isac
