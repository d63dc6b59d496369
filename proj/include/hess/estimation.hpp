#pragma once

// Two-state Kalman filter for the slow baseline of the demand deviation and
// its ramp rate, and the adaptive weight that scales the ramp look-ahead.

#include <array>

namespace hess {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct KfParams {
  double phi = 0.999;                         // ramp persistence per step
  Mat2 process_noise = {{{1e-4, 0.0}, {0.0, 1.0}}};
  double meas_noise = 1.0;                    // MW^2
  double dt = 0.01;                           // s

  void validate() const;
};

struct KfState {
  Vec2 z = {0.0, 0.0};  // [baseline deviation MW, ramp MW/s]
  Mat2 covariance = {{{1.0, 0.0}, {0.0, 1.0}}};
};

struct KfStepResult {
  KfState state;
  double ramp_estimate = 0.0;  // MW/s
};

// One predict/update cycle with transition [[1, dt], [0, phi]] and
// observation [1, 0]. Throws InputError on a non-finite measurement.
KfStepResult kf_step(const KfState& state, const KfParams& params,
                     double measurement);

enum class JerkSource {
  kRampMagnitude,  // |R| as written in the weighting law
  kFilteredJerk,   // band-limited derivative of R
};

struct RampWeightParams {
  double s_ref = 5.0;   // MW/s
  double a_ref = 50.0;  // MW/s (MW/s^2 when jerk_source = kFilteredJerk)
  // Shift the logistic so gamma_ramp crosses 1/2 at |R| = s_ref.
  bool threshold_shift = false;
  JerkSource jerk_source = JerkSource::kRampMagnitude;
  double jerk_filter_hz = 1.0;

  void validate() const;
};

struct RampWeights {
  double gamma_ramp = 0.5;
  double gamma_jerk = 1.0;
  double omega_ramp = 0.5;
};

// gamma_ramp = logistic(|R| / s_ref), gamma_jerk = 1 / (1 + |j| / a_ref)
// where j is `jerk_input` (callers pass R itself for the default source).
RampWeights adaptive_weight(double ramp_estimate, double jerk_input,
                            const RampWeightParams& params);

inline RampWeights adaptive_weight(double ramp_estimate,
                                   const RampWeightParams& params) {
  return adaptive_weight(ramp_estimate, ramp_estimate, params);
}

// Band-limited derivative of the ramp estimate: backward difference through a
// first-order low-pass at `cutoff_hz`.
class JerkFilter {
 public:
  JerkFilter() = default;
  JerkFilter(double cutoff_hz, double dt);

  double step(double ramp_estimate);

 private:
  double alpha_ = 0.0;
  double dt_ = 0.01;
  double previous_ = 0.0;
  double output_ = 0.0;
  bool primed_ = false;
};

}  // namespace hess
