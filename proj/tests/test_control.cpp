#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hess/control.hpp"
#include "hess/errors.hpp"

using namespace hess;

namespace {

constexpr double kDt = 0.01;
constexpr double kPi = std::numbers::pi;

EssControllerParams lowpass_rc() {
  EssControllerParams p;
  p.rc_form = RcForm::kLowPass;
  return p;
}

}  // namespace

TEST_CASE("SC: no error, no slope, no output") {
  ScController c(ScControllerParams{}, kDt);
  for (int k = 0; k < 100; ++k) CHECK(c.step(5.0, 5.0, 0.0).u == 0.0);
}

TEST_CASE("SC: constant error leaves only the feedforward") {
  // Unscaled plant-inverse form: (s + 1/tau) e, steady value e / tau.
  ScControllerParams p;
  p.ff_scale = 1.0 / p.tau_sc;
  ScController c(p, kDt);
  ScControlTerms t;
  for (int k = 0; k < 20000; ++k) t = c.step(1.0, 0.0, 0.0);
  CHECK(std::abs(t.pd) < 1e-9);
  CHECK(t.ff == doctest::Approx(1.0 / p.tau_sc).epsilon(1e-9));
  CHECK(t.u == doctest::Approx(1.0 / p.tau_sc).epsilon(1e-9));

  // Default scaling is the dimensionless (tau s + 1).
  ScController d(ScControllerParams{}, kDt);
  for (int k = 0; k < 20000; ++k) t = d.step(1.0, 0.0, 0.0);
  CHECK(t.u == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("SC: ramp tracking term") {
  ScController c(ScControllerParams{}, kDt);
  ScControlTerms t;
  for (int k = 0; k < 10; ++k) t = c.step(0.0, 0.0, 10.0);
  CHECK(t.rk == doctest::Approx(0.5));
}

TEST_CASE("slope estimator") {
  SlopeEstimator s(5.0, kDt);
  for (int k = 0; k < 50; ++k) CHECK(s.step(3.0) == 0.0);

  SlopeEstimator r(5.0, kDt);
  double v = 0.0;
  for (int k = 0; k < 500; ++k) v = r.step(0.1 * k);
  CHECK(v == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("slope estimator noise stays at the filter's noise gain") {
  // Analytic gain: sum of squares of the impulse response of
  // (1 - z^-1)/dt followed by the bilinear low-pass.
  SlopeEstimator impulse(5.0, kDt);
  impulse.step(0.0);
  double gain = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const double h = impulse.step(k == 0 ? 1.0 : 0.0);
    gain += h * h;
  }
  SlopeEstimator s(5.0, kDt);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  s.step(n(rng));
  double acc = 0.0;
  const int steps = 400000;
  for (int k = 0; k < steps; ++k) {
    const double v = s.step(n(rng));
    acc += v * v;
  }
  CHECK(acc / steps == doctest::Approx(gain).epsilon(0.03));
}

TEST_CASE("BESS: zero error, zero output") {
  EssController c(EssControllerParams{}, kDt);
  for (int k = 0; k < 100; ++k) CHECK(c.step(0.0, 0.0).u == 0.0);
}

TEST_CASE("BESS: DC gains of the error paths") {
  const double e = 0.5;
  const EssControllerParams p = lowpass_rc();
  EssController c(p, kDt);
  EssControlTerms t;
  // hold the device at zero so the error stays e
  for (int k = 0; k < 200000; ++k) t = c.step(e, 0.0);
  CHECK(t.integral == doctest::Approx(p.ki * p.t_leak * e).epsilon(1e-6));
  CHECK(t.rc == doctest::Approx(p.k_rc * e).epsilon(1e-6));
  CHECK(t.integral + t.rc == doctest::Approx((p.ki * p.t_leak + p.k_rc) * e).epsilon(1e-6));

  // the resonant form blocks DC
  EssController r(EssControllerParams{}, kDt);
  for (int k = 0; k < 200000; ++k) t = r.step(e, 0.0);
  CHECK(std::abs(t.rc) < 1e-6);
}

TEST_CASE("BESS: RC magnitude at its own frequency") {
  for (RcForm form : {RcForm::kLowPass, RcForm::kResonant}) {
    EssControllerParams p;
    p.rc_form = form;
    EssController c(p, kDt);
    double amp = 0.0;
    const int n = 200000;  // 2000 s
    for (int k = 0; k < n; ++k) {
      const double e = std::sin(p.omega_rc * k * kDt);
      const double rc = c.step(e, 0.0).rc;
      if (k >= n - 4000) amp = std::max(amp, std::abs(rc));
    }
    const double expect = form == RcForm::kLowPass ? p.k_rc / std::sqrt(2.0) : p.k_rc;
    CHECK(amp == doctest::Approx(expect).epsilon(2e-3));
  }
}

TEST_CASE("anti-windup: leaky integral stays bounded") {
  const EssControllerParams p;
  EssController c(p, kDt);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k)
    worst = std::max(worst, std::abs(c.step(1.0, 0.0).integral));
  CHECK(worst <= p.ki * p.t_leak * 1.0);
}

TEST_CASE("both controllers superpose") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 10.0);
  ScController a(ScControllerParams{}, kDt), b(ScControllerParams{}, kDt),
      ab(ScControllerParams{}, kDt);
  EssController ea(lowpass_rc(), kDt), eb(lowpass_rc(), kDt), eab(lowpass_rc(), kDt);
  for (int k = 0; k < 5000; ++k) {
    const double r1 = n(rng), m1 = n(rng), d1 = n(rng);
    const double r2 = n(rng), m2 = n(rng), d2 = n(rng);
    const double u = a.step(r1, m1, d1).u + b.step(r2, m2, d2).u;
    const double uab = ab.step(r1 + r2, m1 + m2, d1 + d2).u;
    REQUIRE(std::abs(u - uab) <= 1e-9 * std::max(1.0, std::abs(uab)));
    const double v = ea.step(r1, m1).u + eb.step(r2, m2).u;
    const double vab = eab.step(r1 + r2, m1 + m2).u;
    REQUIRE(std::abs(v - vab) <= 1e-9 * std::max(1.0, std::abs(vab)));
  }
}

TEST_CASE("discrete filters are stable at the defaults") {
  CHECK(ScController(ScControllerParams{}, kDt).filters_stable());
  CHECK(EssController(EssControllerParams{}, kDt).filters_stable());
  CHECK(EssController(lowpass_rc(), kDt).filters_stable());
}

TEST_CASE("feedforward transfer function") {
  // scale * tau * (band-limited s + 1/tau) at DC is scale
  CHECK(std::abs(ff_tf(1.0, 0.25, 5.0).at_hz(1e-6) - Complex(1.0, 0.0)) < 1e-5);
  CHECK(std::abs(ff_tf(4.0, 0.25, 5.0).at_hz(1e-6) - Complex(4.0, 0.0)) < 1e-4);
}

TEST_CASE("invalid gains are rejected") {
  ScControllerParams p;
  p.fd = 0.0;
  CHECK_THROWS_AS(ScController(p, kDt), ConfigError);
  EssControllerParams q;
  q.t_leak = -1.0;
  CHECK_THROWS_AS(EssController(q, kDt), ConfigError);
  q = {};
  q.omega_rc = 0.0;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}
