#include "isac/generate.hpp"

#include <cmath>
#include <numbers>

#include "isac/rng.hpp"

namespace isac {

void GenConfig::validate() const {
  if (users < 1 || antennas < 1 || grid_size < 1) {
    throw Error(ErrorCode::kInvalidInput, "K, M and Q must be >= 1");
  }
  if (!(eta_min > 0.0 && eta_min <= eta_max) ||
      !(gamma_db_min <= gamma_db_max) ||
      !(desired_min > 0.0 && desired_min <= desired_max) ||
      !(noise_power > 0.0) || !(sector_deg >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "invalid generator ranges");
  }
}

Scenario generate_scenario(const GenConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  CounterRng rng(cfg.seed, stream);
  Scenario s;
  s.antennas = cfg.antennas;
  s.channels.reserve(cfg.users);
  for (int k = 0; k < cfg.users; ++k) {
    CVector h(cfg.antennas);
    do {
      for (int m = 0; m < cfg.antennas; ++m) h(m) = rng.complex_normal();
    } while (h.squaredNorm() == 0.0);
    s.channels.push_back(std::move(h));
  }
  const double gamma =
      db_to_linear(rng.uniform(cfg.gamma_db_min, cfg.gamma_db_max));
  s.sinr_targets.assign(cfg.users, gamma);
  s.noise_powers.assign(cfg.users, cfg.noise_power);
  s.grid = sector_grid(cfg.grid_size, cfg.sector_deg * std::numbers::pi / 180.0);
  s.desired.reserve(cfg.grid_size);
  for (int q = 0; q < cfg.grid_size; ++q) {
    s.desired.push_back(rng.uniform(cfg.desired_min, cfg.desired_max));
  }
  const double log_lo = std::log10(cfg.eta_min);
  const double log_hi = std::log10(cfg.eta_max);
  s.mse_budget = std::pow(10.0, rng.uniform(log_lo, log_hi));
  return s;
}

ScreenedScenario generate_screened_scenario(const GenConfig& cfg,
                                            const AscentParams& params,
                                            int max_resamples) {
  ScreenedScenario out;
  for (int attempt = 0; attempt <= max_resamples; ++attempt) {
    out.scenario = generate_scenario(cfg, static_cast<std::uint64_t>(attempt));
    out.resamples = attempt;
    try {
      const auto sol = dual_ascent_solve(out.scenario, params);
      if (sol.status == AscentStatus::kConverged) {
        out.accepted = true;
        return out;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleScenario) throw;
    }
  }
  return out;
}

}  // namespace isac
