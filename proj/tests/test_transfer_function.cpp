#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hess/transfer_function.hpp"

using namespace hess;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("polynomial helpers") {
  CHECK(poly_mul({1.0, 1.0}, {1.0, -1.0}) == Poly{1.0, 0.0, -1.0});
  CHECK(poly_add({1.0, 0.0, 1.0}, {2.0}) == Poly{1.0, 0.0, 3.0});
  CHECK(poly_eval({1.0, 2.0, 3.0}, Complex(2.0, 0.0)) == Complex(11.0, 0.0));
  auto r = poly_roots({1.0, -3.0, 2.0});
  REQUIRE(r.size() == 2);
  const double lo = std::min(r[0].real(), r[1].real());
  const double hi = std::max(r[0].real(), r[1].real());
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("first-order corner") {
  const double tau = 0.25;
  const Complex h = first_order_lag(tau).at_hz(1.0 / (2.0 * kPi * tau));
  CHECK(20.0 * std::log10(std::abs(h)) == doctest::Approx(-3.0103).epsilon(1e-4));
  CHECK(std::arg(h) * 180.0 / kPi == doctest::Approx(-45.0));
}

TEST_CASE("bilinear HPF coefficients match the reference") {
  const DiscreteFilter f = bilinear(high_pass(0.2), 0.01);
  // scipy.signal.bilinear
  CHECK(f.b()[0] == doctest::Approx(0.9937560466090253).epsilon(1e-14));
  CHECK(f.b()[1] == doctest::Approx(-0.9937560466090253).epsilon(1e-14));
  CHECK(f.a()[1] == doctest::Approx(-0.9875120932180506).epsilon(1e-14));
  CHECK(f.is_stable());
  CHECK(f.dc_gain() == doctest::Approx(0.0));
}

TEST_CASE("bilinear second-order band-pass matches the reference") {
  const double w = 2.0 * kPi * 0.05, bw = 2.0 * 0.2 * w;
  const DiscreteFilter f = bilinear({{20.0 * bw, 0.0}, {1.0, bw, w * w}}, 0.01);
  CHECK(f.b()[0] == doctest::Approx(0.012558448921454062).epsilon(1e-12));
  CHECK(f.b()[1] == doctest::Approx(0.0));
  CHECK(f.b()[2] == doctest::Approx(-0.012558448921454062).epsilon(1e-12));
  CHECK(f.a()[1] == doctest::Approx(-1.9987342917251365).epsilon(1e-14));
  CHECK(f.a()[2] == doctest::Approx(0.9987441551078546).epsilon(1e-14));
  CHECK(f.is_stable());
}

TEST_CASE("discrete response tracks the continuous one well below Nyquist") {
  const TransferFunction tf = first_order_lag(0.25) * high_pass(0.2);
  const DiscreteFilter f = bilinear(tf, 0.01);
  for (double hz : {0.01, 0.1, 0.5, 1.0}) {
    const Complex c = tf.at_hz(hz), d = f.at_hz(hz, 0.01);
    CHECK(std::abs(d - c) / std::abs(c) < 1e-3);
  }
}

TEST_CASE("step runs the difference equation") {
  DiscreteFilter f({1.0, 1.0}, {1.0, -0.5});
  CHECK(f.step(1.0) == 1.0);
  CHECK(f.step(0.0) == 1.5);
  CHECK(f.step(0.0) == 0.75);
  f.reset();
  CHECK(f.step(2.0) == 2.0);
}

TEST_CASE("unstable filters are detected") {
  CHECK_FALSE(DiscreteFilter({1.0}, {1.0, -1.5}).is_stable());
  CHECK(DiscreteFilter({1.0}, {1.0, -0.5}).is_stable());
}

TEST_CASE("cascade and sum compose") {
  const TransferFunction a = first_order_lag(0.1), b = high_pass(1.0);
  const Complex s(0.0, 3.0);
  CHECK(std::abs((a * b).eval(s) - a.eval(s) * b.eval(s)) < 1e-12);
  CHECK(std::abs((a + b).eval(s) - (a.eval(s) + b.eval(s))) < 1e-12);
}
