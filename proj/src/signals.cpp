#include "hess/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "hess/csv.hpp"
#include "hess/errors.hpp"

namespace hess {

namespace {

std::size_t sample_count(const LoadProfileSpec& spec) {
  return static_cast<std::size_t>(
      std::llround(spec.total_duration() / spec.sample_interval));
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(std::string("load.") + field, what);
}

}  // namespace

void LoadProfileSpec::validate() const {
  require(std::isfinite(baseline_power) && baseline_power >= 0,
          "baseline_power", "must be >= 0");
  require(std::isfinite(peak_power) && peak_power > baseline_power,
          "peak_power", "must exceed baseline_power");
  require(dominant_freq > 0, "dominant_freq", "must be > 0");
  require(sub_freq > dominant_freq, "sub_freq",
          "must be greater than dominant_freq");
  require(dominant_amplitude >= 0, "dominant_amplitude", "must be >= 0");
  require(sub_amplitude >= 0, "sub_amplitude", "must be >= 0");
  require(noise_std >= 0, "noise_std", "must be >= 0");
  require(ramp_duration >= 0, "ramp_duration", "must be >= 0");
  require(sample_interval > 0, "sample_interval", "must be > 0");
  require(!schedule.empty(), "schedule", "must contain at least one phase");
  for (const auto& p : schedule)
    require(p.duration > 0, "schedule", "every phase duration must be > 0");
}

double LoadProfileSpec::total_duration() const {
  double total = 0.0;
  for (const auto& p : schedule) total += p.duration;
  return total;
}

double activity_envelope(const LoadProfileSpec& spec, double t) {
  double start = 0.0;
  for (const auto& p : spec.schedule) {
    const double end = start + p.duration;
    if (t < end || &p == &spec.schedule.back()) {
      if (p.phase == Phase::kIdle) return 0.0;
      if (spec.ramp_duration <= 0) return 1.0;
      const double up = (t - start) / spec.ramp_duration;
      const double down = (end - t) / spec.ramp_duration;
      return std::clamp(std::min(up, down), 0.0, 1.0);
    }
    start = end;
  }
  return 0.0;
}

LoadTrace generate_load(const LoadProfileSpec& spec) {
  spec.validate();
  const std::size_t n = sample_count(spec);
  const double swing = spec.peak_power - spec.baseline_power;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  LoadTrace trace;
  trace.t0 = 0.0;
  trace.dt = spec.sample_interval;
  trace.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.time(k);
    const double e = activity_envelope(spec, t);
    const double oscillation =
        spec.dominant_amplitude * std::sin(kTwoPi * spec.dominant_freq * t) +
        spec.sub_amplitude * std::sin(kTwoPi * spec.sub_freq * t);
    // Draw unconditionally so the noise sequence does not depend on the
    // amplitude settings.
    const double w = noise(rng);
    const double p = spec.baseline_power + e * (swing + oscillation) +
                     spec.noise_std * w;
    trace.samples[k] = std::max(p, 0.0);
  }
  return trace;
}

std::vector<bool> phase_mask(const LoadProfileSpec& spec) {
  spec.validate();
  const std::size_t n = sample_count(spec);
  std::vector<bool> mask(n, false);
  std::size_t k = 0;
  double start = 0.0;
  for (const auto& p : spec.schedule) {
    const double end = start + p.duration;
    while (k < n && (spec.sample_interval * static_cast<double>(k) < end ||
                     &p == &spec.schedule.back())) {
      mask[k++] = p.phase == Phase::kActive;
    }
    start = end;
  }
  return mask;
}

DeltaTrace delta_signal(const LoadTrace& trace, double reference_power) {
  DeltaTrace d;
  d.dt = trace.dt;
  d.reference_power = reference_power;
  d.samples.reserve(trace.samples.size());
  for (double p : trace.samples) d.samples.push_back(p - reference_power);
  return d;
}

void write_load_csv(const LoadTrace& trace, std::ostream& out) {
  out << "time_s,p_dc_mw\n";
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    out << format_double(trace.time(k)) << ',' << format_double(trace.samples[k])
        << '\n';
  }
}

}  // namespace hess
