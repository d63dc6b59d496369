#include "hess/estimation.hpp"

#include <cmath>
#include <numbers>

#include "hess/errors.hpp"

namespace hess {

void KfParams::validate() const {
  if (!(phi > 0 && phi <= 1)) throw ConfigError("kf.phi", "must lie in (0, 1]");
  const auto& q = process_noise;
  const double det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
  if (q[0][1] != q[1][0] || q[0][0] < 0 || q[1][1] < 0 || det < 0)
    throw ConfigError("kf.process_noise",
                      "must be symmetric positive semidefinite");
  if (!(meas_noise > 0)) throw ConfigError("kf.meas_noise", "must be > 0");
  if (!(dt > 0)) throw ConfigError("kf.dt", "must be > 0");
}

KfStepResult kf_step(const KfState& state, const KfParams& params,
                     double measurement) {
  if (!std::isfinite(measurement))
    throw InputError("kf_step: non-finite measurement");

  const double dt = params.dt;
  const double phi = params.phi;
  const auto& p = state.covariance;
  const auto& q = params.process_noise;

  // Predict: z = F z, P = F P F' + Q with F = [[1, dt], [0, phi]].
  const Vec2 zp = {state.z[0] + dt * state.z[1], phi * state.z[1]};
  const double fp00 = p[0][0] + dt * p[1][0];
  const double fp01 = p[0][1] + dt * p[1][1];
  const double fp10 = phi * p[1][0];
  const double fp11 = phi * p[1][1];
  Mat2 pp;
  pp[0][0] = fp00 + dt * fp01 + q[0][0];
  pp[0][1] = phi * fp01 + q[0][1];
  pp[1][0] = fp10 + dt * fp11 + q[1][0];
  pp[1][1] = phi * fp11 + q[1][1];

  // Update with H = [1, 0].
  const double innovation = measurement - zp[0];
  const double s = pp[0][0] + params.meas_noise;
  const double k0 = pp[0][0] / s;
  const double k1 = pp[1][0] / s;

  KfStepResult out;
  out.state.z = {zp[0] + k0 * innovation, zp[1] + k1 * innovation};
  Mat2& c = out.state.covariance;
  c[0][0] = (1.0 - k0) * pp[0][0];
  c[0][1] = (1.0 - k0) * pp[0][1];
  c[1][0] = pp[1][0] - k1 * pp[0][0];
  c[1][1] = pp[1][1] - k1 * pp[0][1];
  const double off = 0.5 * (c[0][1] + c[1][0]);
  c[0][1] = off;
  c[1][0] = off;
  out.ramp_estimate = out.state.z[1];
  return out;
}

void RampWeightParams::validate() const {
  if (!(s_ref > 0)) throw ConfigError("weights.s_ref", "must be > 0");
  if (!(a_ref > 0)) throw ConfigError("weights.a_ref", "must be > 0");
  if (!(jerk_filter_hz > 0))
    throw ConfigError("weights.jerk_filter_hz", "must be > 0");
}

RampWeights adaptive_weight(double ramp_estimate, double jerk_input,
                            const RampWeightParams& params) {
  const double r = std::abs(ramp_estimate);
  double x = r / params.s_ref;
  if (params.threshold_shift) x = (r - params.s_ref) / params.s_ref;
  RampWeights w;
  w.gamma_ramp = 1.0 / (1.0 + std::exp(-x));
  w.gamma_jerk = 1.0 / (1.0 + std::abs(jerk_input) / params.a_ref);
  w.omega_ramp = w.gamma_ramp * w.gamma_jerk;
  return w;
}

JerkFilter::JerkFilter(double cutoff_hz, double dt)
    : alpha_(std::exp(-2.0 * std::numbers::pi * cutoff_hz * dt)), dt_(dt) {}

double JerkFilter::step(double ramp_estimate) {
  const double raw = primed_ ? (ramp_estimate - previous_) / dt_ : 0.0;
  primed_ = true;
  previous_ = ramp_estimate;
  output_ = alpha_ * output_ + (1.0 - alpha_) * raw;
  return output_;
}

}  // namespace hess
