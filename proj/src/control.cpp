#include "hess/control.hpp"

#include <cmath>

#include "hess/errors.hpp"

namespace hess {

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

double feedforward(double derivative, double x, double scale, double tau) {
  return scale * (tau * derivative + x);
}

template <typename Params>
const Params& validated(const Params& p) {
  p.validate();
  return p;
}

}  // namespace

void ScControllerParams::validate() const {
  require(std::isfinite(kp), "sc_controller.kp", "must be finite");
  require(std::isfinite(kd), "sc_controller.kd", "must be finite");
  require(fd > 0, "sc_controller.fd", "must be > 0");
  require(std::isfinite(k_rk), "sc_controller.k_rk", "must be finite");
  require(tau_sc > 0, "sc_controller.tau_sc", "must be > 0");
  require(hpf_cutoff > 0, "sc_controller.hpf_cutoff", "must be > 0");
  require(std::isfinite(ff_scale) && ff_scale >= 0, "sc_controller.ff_scale",
          "must be >= 0");
}

void EssControllerParams::validate() const {
  require(std::isfinite(ki), "ess_controller.ki", "must be finite");
  require(t_leak > 0, "ess_controller.t_leak", "must be > 0");
  require(std::isfinite(k_rc), "ess_controller.k_rc", "must be finite");
  require(omega_rc > 0, "ess_controller.omega_rc", "must be > 0");
  require(rc_damping > 0, "ess_controller.rc_damping", "must be > 0");
  require(tau_ess > 0, "ess_controller.tau_ess", "must be > 0");
  require(fd > 0, "ess_controller.fd", "must be > 0");
  require(std::isfinite(ff_scale) && ff_scale >= 0,
          "ess_controller.ff_scale", "must be >= 0");
}

TransferFunction sc_pd_tf(const ScControllerParams& p) {
  return high_pass(p.hpf_cutoff) *
         (TransferFunction::gain(p.kp) +
          TransferFunction::gain(p.kd) * band_limited_derivative(p.fd));
}

TransferFunction ess_integral_tf(const EssControllerParams& p) {
  return {{p.ki}, {1.0, 1.0 / p.t_leak}};
}

TransferFunction ess_rc_tf(const EssControllerParams& p) {
  const double w = p.omega_rc;
  if (p.rc_form == RcForm::kLowPass) return {{p.k_rc * w}, {1.0, w}};
  const double bw = 2.0 * p.rc_damping * w;
  return {{p.k_rc * bw, 0.0}, {1.0, bw, w * w}};
}

TransferFunction ff_tf(double ff_scale, double tau, double fd) {
  return TransferFunction::gain(ff_scale * tau) *
         (band_limited_derivative(fd) + TransferFunction::gain(1.0 / tau));
}

TransferFunction sc_open_loop(const ScControllerParams& p) {
  return sc_pd_tf(p) * first_order_lag(p.tau_sc);
}

TransferFunction ess_open_loop(const EssControllerParams& p, bool with_rc) {
  TransferFunction c = ess_integral_tf(p);
  if (with_rc) c = c + ess_rc_tf(p);
  return c * first_order_lag(p.tau_ess);
}

SlopeEstimator::SlopeEstimator(double cutoff_hz, double dt)
    : smooth_(bilinear(low_pass(cutoff_hz), dt)), dt_(dt) {}

double SlopeEstimator::step(double p_meas) {
  const double raw = primed_ ? (p_meas - previous_) / dt_ : 0.0;
  primed_ = true;
  previous_ = p_meas;
  value_ = smooth_.step(raw);
  return value_;
}

ScController::ScController(const ScControllerParams& params, double dt)
    : params_(validated(params)),
      dt_(dt),
      pd_(bilinear(sc_pd_tf(params), dt)),
      ff_derivative_(bilinear(band_limited_derivative(params.fd), dt)),
      slope_(params.fd, dt) {}

ScControlTerms ScController::step(double p_ref, double p_meas,
                                  double ramp_dc) {
  if (!primed_) {
    delayed_power_ = p_meas;
    primed_ = true;
  }
  ScControlTerms t;
  t.pd = pd_.step(p_ref - p_meas);
  const double x = p_ref - delayed_power_;
  t.ff = feedforward(ff_derivative_.step(x), x,
                     params_.ff_scale, params_.tau_sc);
  delayed_power_ = p_meas;
  t.rk = params_.k_rk * (ramp_dc - slope_.step(p_meas));
  t.u = t.pd + t.ff + t.rk;
  return t;
}

bool ScController::filters_stable() const {
  return pd_.is_stable() && ff_derivative_.is_stable() &&
         bilinear(low_pass(params_.fd), dt_).is_stable();
}

EssController::EssController(const EssControllerParams& params, double dt)
    : params_(validated(params)),
      dt_(dt),
      integral_(bilinear(ess_integral_tf(params), dt)),
      rc_(bilinear(ess_rc_tf(params), dt)),
      ff_derivative_(bilinear(band_limited_derivative(params.fd), dt)) {}

EssControlTerms EssController::step(double p_ref, double p_meas) {
  if (!primed_) {
    delayed_power_ = p_meas;
    primed_ = true;
  }
  const double e = p_ref - p_meas;
  EssControlTerms t;
  t.integral = integral_.step(e);
  t.rc = rc_.step(e);
  const double x = p_ref - delayed_power_;
  t.ff = feedforward(ff_derivative_.step(x), x,
                     params_.ff_scale, params_.tau_ess);
  delayed_power_ = p_meas;
  t.u = t.integral + t.rc + t.ff;
  return t;
}

bool EssController::filters_stable() const {
  return integral_.is_stable() && rc_.is_stable() &&
         ff_derivative_.is_stable();
}

}  // namespace hess
