#pragma once

// Spectral, frequency-response and run-level summaries.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hess/transfer_function.hpp"

namespace hess {

struct RunResult;

struct PsdResult {
  std::vector<double> freqs;    // Hz, from 0
  std::vector<double> density;  // units^2 / Hz, one-sided
  std::size_t segment_length = 0;
  std::string window = "hann";
};

// Segment length used when none is given: min(4096, n / 4).
std::size_t default_segment_length(std::size_t n);

// Hann-windowed Welch average, one-sided density scaling. Throws InputError
// when the input is shorter than one segment or overlap is outside [0, 1).
PsdResult psd_welch(std::span<const double> samples, double dt,
                    std::size_t segment_length, double overlap = 0.5);
PsdResult psd_welch(std::span<const double> samples, double dt);

// Rectangle-rule integral of the density over [f_lo, f_hi).
double band_power(const PsdResult& psd, double f_lo, double f_hi);

// Indices of interior local maxima, sorted by descending density.
std::vector<std::size_t> spectral_peaks(const PsdResult& psd);

struct BodeResult {
  std::vector<double> freqs;  // Hz
  std::vector<double> magnitude_db;
  std::vector<double> phase_deg;  // unwrapped
  // Points where the response could not be evaluated (pole on the axis).
  std::vector<std::size_t> failed;
};

// Logarithmic grid with `per_decade` points per decade, inclusive ends.
std::vector<double> log_grid(double f_lo, double f_hi, int per_decade);

// Continuous-time response at s = j 2 pi f. Throws InputError on f <= 0.
BodeResult bode_eval(const TransferFunction& tf, std::span<const double> freqs);
// Discrete realization at z = exp(j 2 pi f dt).
BodeResult bode_eval(const DiscreteFilter& filter, double dt,
                     std::span<const double> freqs);

// Indices of interior local maxima of the magnitude curve.
std::vector<std::size_t> magnitude_peaks(const BodeResult& bode);

struct RunMetrics {
  double freq_dev_max = 0.0;      // Hz
  double freq_dev_rms = 0.0;      // Hz
  double grid_power_std = 0.0;    // MW
  double soc_excursion_ess = 0.0; // fraction
  double soc_excursion_sc = 0.0;  // fraction
  double ramp_lag_ms = 0.0;
};

// Lag (in samples, >= 0) maximizing the cross-correlation of `output`
// against `reference` delayed, searched over [0, max_lag].
std::size_t xcorr_lag(std::span<const double> reference,
                      std::span<const double> output, std::size_t max_lag);

RunMetrics compute_metrics(const RunResult& run, double nominal_freq = 60.0);

}  // namespace hess
