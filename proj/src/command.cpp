#include "hess/command.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hess/errors.hpp"

namespace hess {

HpfSplit hpf_step(const HpfState& state, double delta, double dt) {
  // s/(s + wc) with s = k (1 - z^-1)/(1 + z^-1), k = 2/dt:
  //   y[n] = (k (x[n] - x[n-1]) - (wc - k) y[n-1]) / (k + wc)
  const double k = 2.0 / dt;
  const double wc = 2.0 * std::numbers::pi * state.cutoff_freq;
  const double high = (k * (delta - state.previous_input) -
                       (wc - k) * state.previous_output) /
                      (k + wc);
  HpfSplit out;
  out.state = {state.cutoff_freq, delta, high};
  out.high = high;
  out.low = delta - high;
  return out;
}

double sc_ramp_command(double high, double omega_ramp, double t_eff,
                       double ramp_estimate) {
  return high + omega_ramp * t_eff * ramp_estimate;
}

void SocBiasParams::validate(const char* prefix) const {
  const std::string p = std::string(prefix) + "_";
  if (!(gain_kq >= 0)) throw ConfigError(p + "kq", "must be >= 0");
  if (!(time_const_tq > 0)) throw ConfigError(p + "tq", "must be > 0");
  if (!(deadband >= 0)) throw ConfigError(p + "deadband", "must be >= 0");
}

SocBiasStep soc_bias_step(const SocBiasState& state,
                          const SocBiasParams& params, double soc_error,
                          double dt) {
  if (std::abs(soc_error) <= params.deadband)
    return soc_bias_decay(state, params, dt);
  const double next =
      state.offset +
      dt * (-params.gain_kq * soc_error - state.offset / params.time_const_tq);
  return {{next}, next};
}

SocBiasStep soc_bias_decay(const SocBiasState& state,
                           const SocBiasParams& params, double dt) {
  const double next = state.offset * std::exp(-dt / params.time_const_tq);
  return {{next}, next};
}

CommandSet assemble_commands(double high, double low, double sc_ref1,
                             double ess_bias, double sc_bias) {
  CommandSet c;
  c.p_ess_ref = low + ess_bias;
  c.p_sc_ref = sc_ref1 + sc_bias;
  c.components = {high, low, sc_ref1 - high, ess_bias, sc_bias};
  return c;
}

double baseline_correction(std::span<const double> recent_load) {
  if (recent_load.empty())
    throw InputError("baseline_correction: empty window");
  return std::accumulate(recent_load.begin(), recent_load.end(), 0.0) /
         static_cast<double>(recent_load.size());
}

}  // namespace hess
