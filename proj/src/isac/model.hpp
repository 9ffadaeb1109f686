#pragma once

#include <cstddef>
#include <vector>

#include "isac/types.hpp"

namespace isac {

/// Problem data of one ISAC beamforming instance: K single-antenna users
/// served by an M-antenna array, plus a beampattern target on a Q-point grid.
struct Scenario {
  int antennas = 0;                  // M
  std::vector<CVector> channels;     // h_k, K vectors of length M
  std::vector<double> sinr_targets;  // gamma_k, linear scale
  std::vector<double> noise_powers;  // sigma_k^2
  std::vector<double> grid;          // theta_q, radians
  std::vector<double> desired;       // d(theta_q)
  double mse_budget = 0.0;           // eta

  int users() const { return static_cast<int>(channels.size()); }
  int grid_size() const { return static_cast<int>(grid.size()); }

  // Throws kInvalidInput / kDimensionMismatch when an invariant is broken.
  void validate() const;
};

/// Half-wavelength ULA response; element m carries exp(i*pi*m*sin(theta)).
CVector steering_vector(double theta, int antennas);

/// Q uniformly spaced angles over a sector centered at broadside, endpoints
/// included. A single point sits at broadside.
std::vector<double> sector_grid(int points, double sector_rad);

/// The matrices M_q of the quadratic beampattern-MSE form, with
/// sum_q d_q M_q = 0.
struct SensingOperator {
  std::vector<CMatrix> matrices;  // M_q
  std::vector<CVector> steering;  // a(theta_q)
  std::vector<double> desired;    // d(theta_q)
  double desired_norm = 0.0;      // sum_q d_q^2

  int grid_size() const { return static_cast<int>(matrices.size()); }
  int antennas() const {
    return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows());
  }
};

SensingOperator build_sensing_operator(const std::vector<double>& grid,
                                       const std::vector<double>& desired,
                                       int antennas);

inline SensingOperator build_sensing_operator(const Scenario& s) {
  return build_sensing_operator(s.grid, s.desired, s.antennas);
}

/// alpha* = sum_q d_q a_q^H R a_q / sum_q d_q^2
double optimal_scaling(const CMatrix& r, const SensingOperator& op);

/// Beampattern MSE at the optimal scaling: (1/Q) sum_q <R, M_q>^2.
double beampattern_mse(const CMatrix& r, const SensingOperator& op);

/// [<V, M_1>, ..., <V, M_Q>]
RVector sensing_map(const CMatrix& v, const SensingOperator& op);

struct BeamformingSolution {
  std::vector<CMatrix> covariances;  // V_k
  std::vector<double> powers;        // p_k
  double objective = 0.0;            // sum_k tr(V_k)

  CMatrix total_covariance() const;
};

// Total power of a set of covariances.
double total_power(const std::vector<CMatrix>& covariances);

/// SINR of user k in covariance form; sensing power is absorbed in the V_j.
double sinr(int user, const BeamformingSolution& solution,
            const Scenario& scenario);

struct ViolationReport {
  double sinr_violation = 0.0;  // max_k relative SINR shortfall
  double mse_violation = 0.0;   // relative MSE excess over eta
  double objective = 0.0;
};

ViolationReport check_solution(const Scenario& scenario,
                               const BeamformingSolution& solution,
                               double tol = 0.0);

}  // namespace isac
