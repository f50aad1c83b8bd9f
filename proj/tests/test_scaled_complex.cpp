#include <doctest.h>

#include <cmath>
#include <random>

#include "ite/scaled_complex.hpp"

using ite::cplx;
using ite::ScaledComplex;

TEST_CASE("mantissa stays in [1, 2) after arithmetic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const ScaledComplex a = ScaledComplex::exp(cplx(u(rng), u(rng)));
    const ScaledComplex b(cplx(u(rng), u(rng)));
    for (const ScaledComplex& v : {a + b, a - b, a * b, a / b, -a, a.conj()}) {
      const double m = std::abs(v.mantissa());
      CHECK(m >= 1.0);
      CHECK(m < 2.0);
    }
  }
  const ScaledComplex z = ScaledComplex(cplx(1.5, 0.0)) - ScaledComplex(cplx(1.5, 0.0));
  CHECK(z.is_zero());
  CHECK(z.logscale() == 0.0);
}

TEST_CASE("round trip through plain complex within one ulp") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  std::uniform_real_distribution<double> a(-3.2, 3.2);
  for (int i = 0; i < 2000; ++i) {
    const cplx v = std::polar(std::pow(10.0, e(rng)), a(rng));
    const cplx back = ScaledComplex(v).to_complex();
    CHECK(back.real() == doctest::Approx(v.real()).epsilon(2.3e-16));
    CHECK(back.imag() == doctest::Approx(v.imag()).epsilon(2.3e-16));
    CHECK(std::abs(back - v) <= 2.3e-16 * std::abs(v));
  }
}

TEST_CASE("values beyond double range") {
  const ScaledComplex big = ScaledComplex::exp(cplx(2000.0, 0.3));
  CHECK(big.log_abs() == doctest::Approx(2000.0));
  CHECK(big.arg() == doctest::Approx(0.3));
  const ScaledComplex prod = big * big;
  CHECK(prod.log_abs() == doctest::Approx(4000.0));
  const ScaledComplex ratio = prod / big;
  CHECK(std::abs((ratio / big).to_complex() - cplx(1.0, 0.0)) < 1e-12);
  // Adding a tiny term to a huge one leaves it unchanged.
  const ScaledComplex sum = big + ScaledComplex(1.0);
  CHECK(std::abs((sum / big).to_complex() - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::isinf(big.to_complex().real()));
}

TEST_CASE("cancellation at large scale keeps the residue") {
  const ScaledComplex a = ScaledComplex::exp(cplx(800.0, 0.0));
  const ScaledComplex b = a * ScaledComplex(cplx(1.0 + 1e-10, 0.0));
  const ScaledComplex d = b - a;
  CHECK(d.log_abs() == doctest::Approx(800.0 + std::log(1e-10)).epsilon(1e-6));
}

TEST_CASE("scaled sin and cos agree with std for moderate arguments") {
  for (cplx t : {cplx(0.3, 0.1), cplx(-4.0, 2.0), cplx(10.0, -25.0), cplx(1.0, 29.0)}) {
    CHECK(std::abs(ite::scaled_sin(t).to_complex() - std::sin(t)) <= 1e-14 * std::abs(std::sin(t)));
    CHECK(std::abs(ite::scaled_cos(t).to_complex() - std::cos(t)) <= 1e-14 * std::abs(std::cos(t)));
  }
  const ScaledComplex s = ite::scaled_sin(cplx(1.0, 1000.0));
  CHECK(s.log_abs() == doctest::Approx(1000.0 - std::log(2.0)));
}

TEST_CASE("zero and log_abs") {
  CHECK(ScaledComplex().is_zero());
  CHECK(std::isinf(ScaledComplex().log_abs()));
  CHECK(ite::max_log_abs({ScaledComplex(), ScaledComplex(2.0), ScaledComplex(0.5)}) ==
        doctest::Approx(std::log(2.0)));
}
