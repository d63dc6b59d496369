#include "hess/plant.hpp"

#include <algorithm>
#include <cmath>

#include "hess/errors.hpp"

namespace hess {

namespace {

constexpr double kSecondsPerHour = 3600.0;

void require(bool ok, const std::string& key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

void DeviceParams::validate(const std::string& prefix) const {
  const std::string p = prefix + ".";
  require(p_max > 0, p + "p_max", "must be > 0");
  require(ramp_max > 0, p + "ramp_max", "must be > 0");
  require(tau > 0, p + "tau", "must be > 0");
  require(efficiency > 0 && efficiency <= 1, p + "efficiency",
          "must lie in (0, 1]");
  require(capacity > 0, p + "capacity", "must be > 0");
  require(soc_min >= 0 && soc_min < soc_target, p + "soc_min",
          "must satisfy 0 <= soc_min < soc_target");
  require(soc_target < soc_max, p + "soc_target",
          "must satisfy soc_target < soc_max");
  require(soc_max <= 1, p + "soc_max", "must be <= 1");
}

DeviceParams default_bess_params() { return DeviceParams{}; }

DeviceParams default_sc_params() {
  DeviceParams p;
  p.p_max = 10.0;
  p.ramp_max = 100.0;
  p.tau = 0.02;
  p.capacity = 0.1;
  return p;
}

void GridParams::validate() const {
  require(inertia_h > 0, "grid.inertia_h", "must be > 0");
  require(damping_d > 0, "grid.damping_d", "must be > 0");
  require(droop_r > 0, "grid.droop_r", "must be > 0");
  require(governor_tg > 0, "grid.governor_tg", "must be > 0");
  require(base_power > 0, "grid.base_power", "must be > 0");
  require(nominal_freq > 0, "grid.nominal_freq", "must be > 0");
}

double soc_update(double soc, double power, const DeviceParams& params,
                  double dt) {
  const double energy = power * dt / kSecondsPerHour;  // MWh
  double next = soc;
  if (power > 0) {
    next = soc - energy / (params.efficiency * params.capacity);
  } else if (power < 0) {
    next = soc - energy * params.efficiency / params.capacity;
  }
  return std::clamp(next, params.soc_min, params.soc_max);
}

DeviceState device_step(const DeviceState& state, const DeviceParams& params,
                        double u, double dt) {
  if (!std::isfinite(u)) throw InputError("device_step: non-finite input");

  const double alpha = std::exp(-dt / params.tau);
  double p = alpha * state.power + (1.0 - alpha) * u;

  const double max_change = params.ramp_max * dt;
  p = std::clamp(p, state.power - max_change, state.power + max_change);
  p = std::clamp(p, -params.p_max, params.p_max);

  // Largest discharge / charge that keeps SoC inside its bounds this step.
  const double scale = params.capacity * kSecondsPerHour / dt;
  const double max_discharge =
      std::max(0.0, (state.soc - params.soc_min) * params.efficiency * scale);
  const double max_charge =
      std::max(0.0, (params.soc_max - state.soc) / params.efficiency * scale);
  p = std::clamp(p, -max_charge, max_discharge);

  return DeviceState{p, soc_update(state.soc, p, params, dt)};
}

GridState grid_step(const GridState& state, const GridParams& params,
                    double p_electrical, double p_scheduled, double dt) {
  const double load_surplus = (p_electrical - p_scheduled) / params.base_power;
  const double dfreq = (state.governor_power - load_surplus -
                        params.damping_d * state.freq_dev) /
                       (2.0 * params.inertia_h);
  const double dgov =
      (-state.freq_dev / params.droop_r - state.governor_power) /
      params.governor_tg;
  return GridState{state.freq_dev + dt * dfreq,
                   state.governor_power + dt * dgov};
}

}  // namespace hess
