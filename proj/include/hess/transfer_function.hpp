#pragma once

// Rational transfer functions in s, their bilinear (Tustin) discretization,
// and a transposed direct-form II realization for per-sample filtering.

#include <complex>
#include <vector>

namespace hess {

using Complex = std::complex<double>;

// Coefficients ordered from the highest power down: {a_n, ..., a_1, a_0}.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Complex poly_eval(const Poly& p, Complex x);
// Roots of `p` (leading zeros ignored).
std::vector<Complex> poly_roots(const Poly& p);

class TransferFunction {
 public:
  TransferFunction() : num_{0.0}, den_{1.0} {}
  TransferFunction(Poly num, Poly den);

  static TransferFunction gain(double k) { return {{k}, {1.0}}; }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  std::size_t order() const { return den_.size() - 1; }

  Complex eval(Complex s) const;
  Complex at_hz(double f) const;

  friend TransferFunction operator*(const TransferFunction& a,
                                    const TransferFunction& b);
  friend TransferFunction operator+(const TransferFunction& a,
                                    const TransferFunction& b);

 private:
  Poly num_;
  Poly den_;
};

// Building blocks used throughout the controllers.
TransferFunction first_order_lag(double tau);             // 1/(tau s + 1)
TransferFunction high_pass(double cutoff_hz);             // s/(s + wc)
TransferFunction low_pass(double cutoff_hz);              // wc/(s + wc)
TransferFunction band_limited_derivative(double cutoff_hz);  // wc s/(s + wc)

// y[k] = sum b_i x[k-i] - sum_{i>=1} a_i y[k-i], with a_0 = 1.
class DiscreteFilter {
 public:
  DiscreteFilter() : b_{0.0}, a_{1.0}, state_(1, 0.0) {}
  DiscreteFilter(Poly b, Poly a);

  double step(double x);
  void reset();

  const Poly& b() const { return b_; }
  const Poly& a() const { return a_; }

  Complex eval_z(Complex z) const;
  // Frequency response at f Hz for sample interval dt.
  Complex at_hz(double f, double dt) const;
  std::vector<Complex> poles() const;
  bool is_stable() const;
  double dc_gain() const;

 private:
  Poly b_;
  Poly a_;
  std::vector<double> state_;
};

// s = (2/dt)(z - 1)/(z + 1), no prewarping.
DiscreteFilter bilinear(const TransferFunction& tf, double dt);

}  // namespace hess
