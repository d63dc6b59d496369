#include "hess/transfer_function.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hess {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Poly trim(Poly p) {
  auto first = std::find_if(p.begin(), p.end(), [](double c) { return c != 0.0; });
  if (first == p.end()) return {0.0};
  p.erase(p.begin(), first);
  return p;
}

Poly pad_front(const Poly& p, std::size_t n) {
  Poly out(n - p.size(), 0.0);
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  const std::size_t n = std::max(a.size(), b.size());
  Poly pa = pad_front(a, n), pb = pad_front(b, n);
  for (std::size_t i = 0; i < n; ++i) pa[i] += pb[i];
  return pa;
}

Complex poly_eval(const Poly& p, Complex x) {
  Complex acc = 0.0;
  for (double c : p) acc = acc * x + c;
  return acc;
}

std::vector<Complex> poly_roots(const Poly& p) {
  const Poly q = trim(p);
  const std::size_t n = q.size() - 1;
  if (n == 0) return {};
  if (n == 1) return {Complex(-q[1] / q[0], 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) companion(0, j) = -q[j + 1] / q[0];
  for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<Complex> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    roots.push_back(es.eigenvalues()[i]);
  return roots;
}

TransferFunction::TransferFunction(Poly num, Poly den)
    : num_(trim(std::move(num))), den_(trim(std::move(den))) {
  if (den_.size() == 1 && den_[0] == 0.0)
    throw std::invalid_argument("transfer function with zero denominator");
}

Complex TransferFunction::eval(Complex s) const {
  return poly_eval(num_, s) / poly_eval(den_, s);
}

Complex TransferFunction::at_hz(double f) const {
  return eval(Complex(0.0, kTwoPi * f));
}

TransferFunction operator*(const TransferFunction& a,
                           const TransferFunction& b) {
  return {poly_mul(a.num_, b.num_), poly_mul(a.den_, b.den_)};
}

TransferFunction operator+(const TransferFunction& a,
                           const TransferFunction& b) {
  if (a.den_ == b.den_) return {poly_add(a.num_, b.num_), a.den_};
  return {poly_add(poly_mul(a.num_, b.den_), poly_mul(b.num_, a.den_)),
          poly_mul(a.den_, b.den_)};
}

TransferFunction first_order_lag(double tau) { return {{1.0}, {tau, 1.0}}; }

TransferFunction high_pass(double cutoff_hz) {
  return {{1.0, 0.0}, {1.0, kTwoPi * cutoff_hz}};
}

TransferFunction low_pass(double cutoff_hz) {
  const double wc = kTwoPi * cutoff_hz;
  return {{wc}, {1.0, wc}};
}

TransferFunction band_limited_derivative(double cutoff_hz) {
  const double wc = kTwoPi * cutoff_hz;
  return {{wc, 0.0}, {1.0, wc}};
}

DiscreteFilter::DiscreteFilter(Poly b, Poly a) : b_(std::move(b)), a_(std::move(a)) {
  if (a_.empty() || a_[0] == 0.0)
    throw std::invalid_argument("discrete filter needs a nonzero a0");
  const std::size_t n = std::max(a_.size(), b_.size());
  b_ = [&] {
    Poly out = b_;
    out.resize(n, 0.0);
    return out;
  }();
  a_.resize(n, 0.0);
  const double a0 = a_[0];
  for (auto& c : b_) c /= a0;
  for (auto& c : a_) c /= a0;
  state_.assign(n, 0.0);
}

double DiscreteFilter::step(double x) {
  const std::size_t n = b_.size();
  const double y = b_[0] * x + state_[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double next = i + 1 < n ? state_[i] : 0.0;
    state_[i - 1] = b_[i] * x - a_[i] * y + next;
  }
  return y;
}

void DiscreteFilter::reset() { std::fill(state_.begin(), state_.end(), 0.0); }

Complex DiscreteFilter::eval_z(Complex z) const {
  // Coefficients are in powers of z^-1; evaluate as polynomials in z^-1.
  const Complex zi = 1.0 / z;
  Complex num = 0.0, den = 0.0;
  for (std::size_t i = b_.size(); i-- > 0;) num = num * zi + b_[i];
  for (std::size_t i = a_.size(); i-- > 0;) den = den * zi + a_[i];
  return num / den;
}

Complex DiscreteFilter::at_hz(double f, double dt) const {
  return eval_z(std::polar(1.0, kTwoPi * f * dt));
}

std::vector<Complex> DiscreteFilter::poles() const { return poly_roots(a_); }

bool DiscreteFilter::is_stable() const {
  for (const auto& p : poles())
    if (!(std::abs(p) < 1.0)) return false;
  return true;
}

double DiscreteFilter::dc_gain() const { return eval_z(1.0).real(); }

DiscreteFilter bilinear(const TransferFunction& tf, double dt) {
  const std::size_t n = std::max(tf.num().size(), tf.den().size()) - 1;
  const double k = 2.0 / dt;
  // Each s^m term becomes k^m (z - 1)^m (z + 1)^(n - m); dividing through by
  // z^n leaves the same coefficient order in z^-1.
  auto map = [&](const Poly& p) {
    const Poly full = pad_front(p, n + 1);
    Poly out(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t m = n - i;
      Poly term{full[i] * std::pow(k, static_cast<double>(m))};
      for (std::size_t j = 0; j < m; ++j) term = poly_mul(term, {1.0, -1.0});
      for (std::size_t j = 0; j < n - m; ++j) term = poly_mul(term, {1.0, 1.0});
      out = poly_add(out, term);
    }
    return out;
  };
  return DiscreteFilter(map(tf.num()), map(tf.den()));
}

}  // namespace hess
