#pragma once

// Per-step power references for the two devices: complementary high-pass
// split of the demand deviation, ramp look-ahead for the SC, SoC bias
// offsets, and demand baseline correction.

#include <span>

namespace hess {

struct HpfState {
  double cutoff_freq = 0.2;  // Hz
  double previous_input = 0.0;
  double previous_output = 0.0;
};

struct HpfSplit {
  HpfState state;
  double high = 0.0;  // SC share
  double low = 0.0;   // BESS share, exactly delta - high
};

// Bilinear discretization of s / (s + 2 pi fc).
HpfSplit hpf_step(const HpfState& state, double delta, double dt);

// high + omega * t_eff * ramp
double sc_ramp_command(double high, double omega_ramp, double t_eff,
                       double ramp_estimate);

struct SocBiasParams {
  double gain_kq = 0.0;        // MW per SoC fraction per s
  double time_const_tq = 30.0; // s
  double deadband = 0.002;     // SoC fraction

  // Error keys are `prefix`_kq etc., matching the config ("command.ess_bias_kq").
  void validate(const char* prefix) const;
};

struct SocBiasState {
  double offset = 0.0;  // MW
};

struct SocBiasStep {
  SocBiasState state;
  double offset = 0.0;
};

// `soc_error` is target - soc. Outside the deadband the offset integrates
// -kq * error - offset / Tq; inside it only decays with time constant Tq.
SocBiasStep soc_bias_step(const SocBiasState& state,
                          const SocBiasParams& params, double soc_error,
                          double dt);

// Leak-only update, used when the bias loop is paused.
SocBiasStep soc_bias_decay(const SocBiasState& state,
                           const SocBiasParams& params, double dt);

struct CommandComponents {
  double hpf_part = 0.0;
  double low_part = 0.0;
  double ramp_part = 0.0;
  double ess_bias = 0.0;
  double sc_bias = 0.0;
};

struct CommandSet {
  double p_ess_ref = 0.0;
  double p_sc_ref = 0.0;
  CommandComponents components;
};

// `high` is the bare HPF output; `sc_ref1` = high + ramp look-ahead.
CommandSet assemble_commands(double high, double low, double sc_ref1,
                             double ess_bias, double sc_bias);

// Moving average of recent demand, used as the corrected reference power.
// Throws InputError on an empty window.
double baseline_correction(std::span<const double> recent_load);

}  // namespace hess
