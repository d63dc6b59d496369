#include "hess/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include "hess/engine.hpp"
#include "hess/errors.hpp"

namespace hess {

namespace {

constexpr double kPi = std::numbers::pi;

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace

std::size_t default_segment_length(std::size_t n) {
  return std::min<std::size_t>(4096, n / 4);
}

PsdResult psd_welch(std::span<const double> samples, double dt,
                    std::size_t segment_length, double overlap) {
  if (!(overlap >= 0.0 && overlap < 1.0))
    throw InputError("psd_welch: overlap must lie in [0, 1)");
  if (segment_length < 2 || segment_length > samples.size())
    throw InputError("psd_welch: input shorter than one segment");
  if (!(dt > 0)) throw InputError("psd_welch: dt must be > 0");

  const std::size_t m = segment_length;
  const std::size_t bins = m / 2 + 1;
  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(m) * (1.0 - overlap))));

  std::vector<double> window(m);
  double window_power = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    // Periodic Hann.
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(m));
    window_power += window[i] * window[i];
  }

  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(m));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE));

  PsdResult psd;
  psd.segment_length = m;
  psd.density.assign(bins, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + m <= samples.size(); start += step) {
    for (std::size_t i = 0; i < m; ++i) in.get()[i] = samples[start + i] * window[i];
    fftw_execute(plan.get());
    for (std::size_t j = 0; j < bins; ++j) {
      const double re = out.get()[j][0], im = out.get()[j][1];
      psd.density[j] += re * re + im * im;
    }
    ++segments;
  }

  const double fs = 1.0 / dt;
  const double scale = 1.0 / (fs * window_power * static_cast<double>(segments));
  psd.freqs.resize(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    psd.freqs[j] = static_cast<double>(j) * fs / static_cast<double>(m);
    const bool edge = j == 0 || (m % 2 == 0 && j == bins - 1);
    psd.density[j] *= scale * (edge ? 1.0 : 2.0);
  }
  return psd;
}

PsdResult psd_welch(std::span<const double> samples, double dt) {
  return psd_welch(samples, dt, default_segment_length(samples.size()), 0.5);
}

double band_power(const PsdResult& psd, double f_lo, double f_hi) {
  if (psd.freqs.size() < 2) return 0.0;
  const double df = psd.freqs[1] - psd.freqs[0];
  double acc = 0.0;
  for (std::size_t j = 0; j < psd.freqs.size(); ++j)
    if (psd.freqs[j] >= f_lo && psd.freqs[j] < f_hi) acc += psd.density[j];
  return acc * df;
}

std::vector<std::size_t> spectral_peaks(const PsdResult& psd) {
  std::vector<std::size_t> peaks;
  const auto& d = psd.density;
  for (std::size_t j = 1; j + 1 < d.size(); ++j)
    if (d[j] > d[j - 1] && d[j] >= d[j + 1]) peaks.push_back(j);
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  return peaks;
}

std::vector<double> log_grid(double f_lo, double f_hi, int per_decade) {
  if (!(f_lo > 0 && f_hi > f_lo && per_decade > 0))
    throw InputError("log_grid: need 0 < f_lo < f_hi and per_decade > 0");
  const double decades = std::log10(f_hi / f_lo);
  const auto n = static_cast<std::size_t>(std::llround(decades * per_decade));
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    f[i] = f_lo * std::pow(10.0, static_cast<double>(i) / per_decade);
  return f;
}

namespace {

template <typename Eval>
BodeResult bode_from(std::span<const double> freqs, Eval&& eval) {
  BodeResult b;
  double previous_raw = 0.0, offset = 0.0;
  bool have_previous = false;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0)) throw InputError("bode_eval: frequencies must be > 0");
    if (i > 0 && !(freqs[i] > freqs[i - 1]))
      throw InputError("bode_eval: frequencies must be increasing");
    const Complex h = eval(freqs[i]);
    b.freqs.push_back(freqs[i]);
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
      b.failed.push_back(i);
      b.magnitude_db.push_back(std::numeric_limits<double>::quiet_NaN());
      b.phase_deg.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double raw = std::arg(h) * 180.0 / kPi;
    if (have_previous) {
      const double jump = raw - previous_raw;
      if (jump > 180.0) offset -= 360.0;
      if (jump < -180.0) offset += 360.0;
    }
    previous_raw = raw;
    have_previous = true;
    b.magnitude_db.push_back(20.0 * std::log10(std::abs(h)));
    b.phase_deg.push_back(raw + offset);
  }
  return b;
}

}  // namespace

BodeResult bode_eval(const TransferFunction& tf, std::span<const double> freqs) {
  return bode_from(freqs, [&](double f) {
    const Complex s(0.0, 2.0 * kPi * f);
    const Complex den = poly_eval(tf.den(), s);
    if (std::abs(den) == 0.0)
      return Complex(std::numeric_limits<double>::infinity(), 0.0);
    return poly_eval(tf.num(), s) / den;
  });
}

BodeResult bode_eval(const DiscreteFilter& filter, double dt,
                     std::span<const double> freqs) {
  return bode_from(freqs, [&](double f) { return filter.at_hz(f, dt); });
}

std::vector<std::size_t> magnitude_peaks(const BodeResult& bode) {
  std::vector<std::size_t> peaks;
  const auto& m = bode.magnitude_db;
  for (std::size_t i = 1; i + 1 < m.size(); ++i)
    if (m[i] > m[i - 1] && m[i] > m[i + 1]) peaks.push_back(i);
  return peaks;
}

std::size_t xcorr_lag(std::span<const double> reference,
                      std::span<const double> output, std::size_t max_lag) {
  const std::size_t n = std::min(reference.size(), output.size());
  if (n == 0) return 0;
  const double mr = mean(reference.first(n)), mo = mean(output.first(n));
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag <= std::min(max_lag, n - 1); ++lag) {
    double acc = 0.0;
    for (std::size_t k = lag; k < n; ++k)
      acc += (reference[k - lag] - mr) * (output[k] - mo);
    acc /= static_cast<double>(n - lag);
    if (acc > best_value) {
      best_value = acc;
      best = lag;
    }
  }
  return best;
}

RunMetrics compute_metrics(const RunResult& run, double nominal_freq) {
  run.check_aligned();
  if (run.size() == 0) throw InputError("compute_metrics: empty run");
  RunMetrics m;
  double sq = 0.0;
  for (double f : run.freq_hz) {
    const double dev = std::abs(f - nominal_freq);
    m.freq_dev_max = std::max(m.freq_dev_max, dev);
    sq += dev * dev;
  }
  m.freq_dev_rms = std::sqrt(sq / static_cast<double>(run.size()));
  m.grid_power_std = stddev(run.p_grid);
  auto excursion = [](const std::vector<double>& soc) {
    const auto [lo, hi] = std::minmax_element(soc.begin(), soc.end());
    return *hi - *lo;
  };
  m.soc_excursion_ess = excursion(run.soc_ess);
  m.soc_excursion_sc = excursion(run.soc_sc);
  if (run.size() > 1) {
    const double dt = run.time[1] - run.time[0];
    const auto max_lag = static_cast<std::size_t>(std::llround(2.0 / dt));
    m.ramp_lag_ms = 1e3 * dt * static_cast<double>(
                                   xcorr_lag(run.p_sc_ref, run.p_sc, max_lag));
  }
  return m;
}

}  // namespace hess
