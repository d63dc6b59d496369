#pragma once

// Tracking controllers producing the plant inputs U_SC and U_ESS.
//
// SC:   u = G_HPF (kp + kd D_fd) e + FF + k_rk (R_dc - R_sc)
// BESS: u = (k_I / (s + 1/T_leak) + C_RC) e + FF
//
// where e = p_ref - p_meas, D_fd = 2 pi fd s / (s + 2 pi fd) is a
// band-limited derivative, and FF = ff_scale tau (D_fd + 1/tau) applied to
// p_ref minus p_meas delayed one sample. ff_scale = 1 gives the plant inverse
// (tau s + 1). All filters are bilinear discretizations.

#include <string>

#include "hess/transfer_function.hpp"

namespace hess {

struct ScControllerParams {
  double kp = 1.0;
  double kd = 0.05;
  double fd = 5.0;           // Hz
  double k_rk = 0.05;        // MW per MW/s
  double tau_sc = 0.02;      // s
  double hpf_cutoff = 0.2;   // Hz
  double ff_scale = 1.0;

  void validate() const;
};

enum class RcForm {
  kResonant,  // k_RC 2 zeta w s / (s^2 + 2 zeta w s + w^2)
  kLowPass,   // k_RC w / (s + w)
};

struct EssControllerParams {
  double ki = 2.0;
  double t_leak = 20.0;          // s
  double k_rc = 20.0;
  double omega_rc = 0.3141592653589793;  // rad/s (0.05 Hz)
  double rc_damping = 0.2;
  RcForm rc_form = RcForm::kResonant;
  double tau_ess = 0.25;         // s
  double fd = 5.0;               // Hz, FF derivative band limit
  double ff_scale = 1.0;

  void validate() const;
};

// Continuous-time pieces, shared by the discrete realizations and Bode.
TransferFunction sc_pd_tf(const ScControllerParams& p);
TransferFunction ess_integral_tf(const EssControllerParams& p);
TransferFunction ess_rc_tf(const EssControllerParams& p);
TransferFunction ff_tf(double ff_scale, double tau, double fd);

// Error-driven path times the device lag (FF and RK act on references and
// estimates and are left out).
TransferFunction sc_open_loop(const ScControllerParams& p);
TransferFunction ess_open_loop(const EssControllerParams& p,
                               bool with_rc = true);

// Band-limited backward difference of the measured SC power.
class SlopeEstimator {
 public:
  SlopeEstimator() = default;
  SlopeEstimator(double cutoff_hz, double dt);

  double step(double p_meas);
  double value() const { return value_; }

 private:
  DiscreteFilter smooth_;
  double dt_ = 0.01;
  double previous_ = 0.0;
  double value_ = 0.0;
  bool primed_ = false;
};

struct ScControlTerms {
  double u = 0.0;
  double pd = 0.0;
  double ff = 0.0;
  double rk = 0.0;
};

class ScController {
 public:
  ScController(const ScControllerParams& params, double dt);

  ScControlTerms step(double p_ref, double p_meas, double ramp_dc);

  const ScControllerParams& params() const { return params_; }
  double slope_estimate() const { return slope_.value(); }
  bool filters_stable() const;

 private:
  ScControllerParams params_;
  double dt_;
  DiscreteFilter pd_;
  DiscreteFilter ff_derivative_;
  SlopeEstimator slope_;
  double delayed_power_ = 0.0;
  bool primed_ = false;
};

struct EssControlTerms {
  double u = 0.0;
  double integral = 0.0;
  double rc = 0.0;
  double ff = 0.0;
};

class EssController {
 public:
  EssController(const EssControllerParams& params, double dt);

  EssControlTerms step(double p_ref, double p_meas);

  const EssControllerParams& params() const { return params_; }
  bool filters_stable() const;

 private:
  EssControllerParams params_;
  double dt_;
  DiscreteFilter integral_;
  DiscreteFilter rc_;
  DiscreteFilter ff_derivative_;
  double delayed_power_ = 0.0;
  bool primed_ = false;
};

}  // namespace hess
