#pragma once

#include <complex>

namespace ite {

using cplx = std::complex<double>;

/// Complex number stored as mantissa * exp(logscale).
///
/// The mantissa is kept in |m| in [1, 2) (or exactly zero with logscale 0), so
/// values far outside the double range (e.g. e^{|Im k| B} growth of radial
/// solutions) can be multiplied and added without overflow. Addition rescales
/// to the larger logscale before combining mantissas.
class ScaledComplex {
 public:
  ScaledComplex() = default;
  ScaledComplex(cplx value);  // NOLINT(google-explicit-constructor)
  ScaledComplex(double value) : ScaledComplex(cplx(value, 0.0)) {}  // NOLINT
  ScaledComplex(cplx mantissa, double logscale);

  /// e^z for complex z without overflow.
  static ScaledComplex exp(cplx z);

  const cplx& mantissa() const noexcept { return mantissa_; }
  double logscale() const noexcept { return logscale_; }
  bool is_zero() const noexcept { return mantissa_ == cplx(0.0, 0.0); }

  /// ln|value|; -infinity for zero.
  double log_abs() const;
  double arg() const { return std::arg(mantissa_); }

  /// Plain complex value; overflows to inf / underflows to 0 outside range.
  cplx to_complex() const;

  ScaledComplex conj() const { return {std::conj(mantissa_), logscale_}; }

  ScaledComplex operator-() const {
    ScaledComplex r = *this;
    r.mantissa_ = -r.mantissa_;
    return r;
  }
  ScaledComplex& operator+=(const ScaledComplex& o);
  ScaledComplex& operator-=(const ScaledComplex& o) { return *this += -o; }
  ScaledComplex& operator*=(const ScaledComplex& o);
  ScaledComplex& operator/=(const ScaledComplex& o);

  friend ScaledComplex operator+(ScaledComplex a, const ScaledComplex& b) { return a += b; }
  friend ScaledComplex operator-(ScaledComplex a, const ScaledComplex& b) { return a -= b; }
  friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
  friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }

 private:
  void normalize();

  cplx mantissa_{0.0, 0.0};
  double logscale_ = 0.0;
};

/// Largest log-magnitude among the arguments (ignores zeros).
double max_log_abs(std::initializer_list<ScaledComplex> values);

}  // namespace ite

namespace ite {

/// sin and cos of a complex argument, safe for large |Im t|.
ScaledComplex scaled_sin(cplx t);
ScaledComplex scaled_cos(cplx t);

}  // namespace ite
