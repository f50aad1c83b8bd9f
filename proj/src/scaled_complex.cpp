#include "ite/scaled_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ite {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

ScaledComplex::ScaledComplex(cplx value) : mantissa_(value) { normalize(); }

ScaledComplex::ScaledComplex(cplx mantissa, double logscale)
    : mantissa_(mantissa), logscale_(logscale) {
  normalize();
}

ScaledComplex ScaledComplex::exp(cplx z) {
  return ScaledComplex(std::polar(1.0, z.imag()), z.real());
}

void ScaledComplex::normalize() {
  const double a = std::abs(mantissa_);
  if (a == 0.0) {
    mantissa_ = cplx(0.0, 0.0);
    logscale_ = 0.0;
    return;
  }
  if (!std::isfinite(a)) return;
  int e = 0;
  std::frexp(a, &e);  // a = f * 2^e, f in [0.5, 1)
  const int shift = e - 1;
  if (shift != 0) {
    mantissa_ = cplx(std::ldexp(mantissa_.real(), -shift),
                     std::ldexp(mantissa_.imag(), -shift));
    logscale_ += shift * kLn2;
  }
}

double ScaledComplex::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return logscale_ + std::log(std::abs(mantissa_));
}

cplx ScaledComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  const double steps = std::round(logscale_ / kLn2);
  if (std::abs(logscale_ - steps * kLn2) <=
      1e-13 * std::max(1.0, std::abs(logscale_))) {
    // Exact power-of-two scaling keeps the round trip ulp-exact.
    const double clamped = std::clamp(steps, -4000.0, 4000.0);
    const int s = static_cast<int>(clamped);
    return {std::ldexp(mantissa_.real(), s), std::ldexp(mantissa_.imag(), s)};
  }
  return mantissa_ * std::exp(logscale_);
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (o.logscale_ > logscale_) {
    mantissa_ = o.mantissa_ + mantissa_ * std::exp(logscale_ - o.logscale_);
    logscale_ = o.logscale_;
  } else {
    mantissa_ += o.mantissa_ * std::exp(o.logscale_ - logscale_);
  }
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& o) {
  if (is_zero() || o.is_zero()) {
    *this = ScaledComplex();
    return *this;
  }
  mantissa_ *= o.mantissa_;
  logscale_ += o.logscale_;
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& o) {
  if (is_zero()) return *this;
  mantissa_ /= o.mantissa_;
  logscale_ -= o.logscale_;
  normalize();
  return *this;
}

double max_log_abs(std::initializer_list<ScaledComplex> values) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::max(best, v.log_abs());
  return best;
}

}  // namespace ite

namespace ite {

namespace {

constexpr double kDirectTrigLimit = 30.0;

// (e^{it} + sign * e^{-it}) / 2 with the growth factored out.
ScaledComplex half_exp_combination(cplx t, double sign) {
  const double x = t.real();
  const double y = t.imag();
  const double ay = std::abs(y);
  const cplx plus = std::polar(std::exp(-y - ay), x);    // e^{it} e^{-|y|}
  const cplx minus = std::polar(std::exp(y - ay), -x);   // e^{-it} e^{-|y|}
  return ScaledComplex(0.5 * (plus + sign * minus), ay);
}

}  // namespace

ScaledComplex scaled_sin(cplx t) {
  if (std::abs(t.imag()) < kDirectTrigLimit) return ScaledComplex(std::sin(t));
  // sin t = (e^{it} - e^{-it}) / (2i)
  return half_exp_combination(t, -1.0) * ScaledComplex(cplx(0.0, -1.0));
}

ScaledComplex scaled_cos(cplx t) {
  if (std::abs(t.imag()) < kDirectTrigLimit) return ScaledComplex(std::cos(t));
  return half_exp_combination(t, 1.0);
}

}  // namespace ite
