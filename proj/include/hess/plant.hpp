#pragma once

// Storage devices (first-order lag with power, ramp and SoC limits) and a
// single-machine grid (swing equation with a first-order governor).

#include <string>

namespace hess {

struct DeviceParams {
  double p_max = 30.0;       // MW
  double ramp_max = 15.0;    // MW/s
  double tau = 0.25;         // s
  double efficiency = 0.97;  // applied on each of charge and discharge
  double capacity = 10.0;    // MWh
  double soc_min = 0.1;
  double soc_max = 0.9;
  double soc_target = 0.5;

  // `prefix` is the config section used in error keys ("bess", "sc").
  void validate(const std::string& prefix) const;
};

// Default ratings, 30 MW battery and 10 MW supercap. Capacities are a free choice.
DeviceParams default_bess_params();
DeviceParams default_sc_params();

// Positive power means discharging.
struct DeviceState {
  double power = 0.0;  // MW
  double soc = 0.5;
};

struct GridParams {
  double inertia_h = 6.0;      // s
  double damping_d = 3.0;      // pu
  double droop_r = 0.05;       // pu
  double governor_tg = 0.3;    // s
  double base_power = 1000.0;  // MW
  double nominal_freq = 60.0;  // Hz

  void validate() const;
};

struct GridState {
  double freq_dev = 0.0;        // pu
  double governor_power = 0.0;  // pu
};

// Energy bookkeeping over one step at constant power. Discharge divides by
// efficiency, charge multiplies by it. Result is clamped to the SoC bounds.
double soc_update(double soc, double power, const DeviceParams& params,
                  double dt);

// ZOH first-order lag toward `u`, then rate limit, power limit and SoC
// feasibility, in that order. Throws InputError for non-finite `u`.
DeviceState device_step(const DeviceState& state, const DeviceParams& params,
                        double u, double dt);

// Explicit-Euler step of
//   2H dfreq/dt = governor - dP - D freq
//   Tg dgov/dt  = -freq / R - governor
// with dP = (p_electrical - p_scheduled) / base_power.
GridState grid_step(const GridState& state, const GridParams& params,
                    double p_electrical, double p_scheduled, double dt);

inline double freq_hz(const GridState& s, const GridParams& p) {
  return p.nominal_freq * (1.0 + s.freq_dev);
}

}  // namespace hess
