#pragma once

#include <cmath>
#include <cstdint>

#include "isac/ascent.hpp"
#include "isac/model.hpp"

namespace isac {

struct GenConfig {
  int users = 2;      // K
  int antennas = 2;   // M
  int grid_size = 36; // Q
  double sector_deg = 120.0;
  double eta_min = 1e-8;  // log-uniform
  double eta_max = 1e-3;
  double gamma_db_min = -30.0;  // uniform in dB, common to all users
  double gamma_db_max = -10.0;
  double desired_min = 0.5;
  double desired_max = 1.5;
  double noise_power = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// One draw from stream `stream` of the seed; deterministic in (cfg, stream).
Scenario generate_scenario(const GenConfig& cfg, std::uint64_t stream = 0);

struct ScreenedScenario {
  Scenario scenario;
  int resamples = 0;  // rejected draws before this one
  bool accepted = false;
};

/// Draws until the outer loop converges on the draw (classical problem
/// feasible and the MSE budget attainable), at most `max_resamples` times.
ScreenedScenario generate_screened_scenario(const GenConfig& cfg,
                                            const AscentParams& params = {},
                                            int max_resamples = 50);

}  // namespace isac
