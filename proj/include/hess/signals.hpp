#pragma once

// Synthetic datacenter demand traces and the deviation signal fed to the
// HESS command generator.

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hess {

enum class Phase { kActive, kIdle };

struct SchedulePhase {
  Phase phase = Phase::kActive;
  double duration = 0.0;  // s
};

struct LoadProfileSpec {
  double baseline_power = 450.0;    // MW, non-computational floor
  double peak_power = 500.0;        // MW, active-phase plateau
  double dominant_freq = 0.05;      // Hz, training-iteration cycle
  double sub_freq = 0.15;           // Hz
  double dominant_amplitude = 10.0; // MW
  double sub_amplitude = 3.0;       // MW
  double noise_std = 5.0;           // MW
  double ramp_duration = 2.0;       // s
  std::vector<SchedulePhase> schedule = {{Phase::kIdle, 60.0},
                                         {Phase::kActive, 480.0},
                                         {Phase::kIdle, 60.0}};
  double sample_interval = 0.01;    // s
  std::uint64_t seed = 1;

  // Throws ConfigError naming the offending field ("load.<field>").
  void validate() const;

  double total_duration() const;
};

struct LoadTrace {
  double t0 = 0.0;
  double dt = 0.01;
  std::vector<double> samples;  // MW

  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

struct DeltaTrace {
  double dt = 0.01;
  std::vector<double> samples;  // MW
  double reference_power = 0.0;
};

// Envelope e(t) in [0, 1]: 0 while idle, 1 on an active plateau, linear over
// ramp_duration at the start and end of every active phase.
double activity_envelope(const LoadProfileSpec& spec, double t);

LoadTrace generate_load(const LoadProfileSpec& spec);

// One flag per sample of generate_load(spec): true inside an active phase.
std::vector<bool> phase_mask(const LoadProfileSpec& spec);

DeltaTrace delta_signal(const LoadTrace& trace, double reference_power);

// `time_s,p_dc_mw` with a one-line header.
void write_load_csv(const LoadTrace& trace, std::ostream& out);

}  // namespace hess
