#include "ite/determinant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ite/errors.hpp"

namespace ite {

namespace {

constexpr double kSeriesRadius = 0.5;
constexpr int kBesselSeriesTerms = 14;

// b_m = (-1/2)^m / (m! (2m+3)!!), so j1(t) = sum_m b_m t^{2m+1}.
std::array<double, kBesselSeriesTerms> bessel_series_coefficients() {
  std::array<double, kBesselSeriesTerms> b{};
  double fact = 1.0;      // m!
  double dfact = 3.0;     // (2m+3)!!
  double pw = 1.0;        // (-1/2)^m
  for (int m = 0; m < kBesselSeriesTerms; ++m) {
    if (m > 0) {
      fact *= m;
      dfact *= 2 * m + 3;
      pw *= -0.5;
    }
    b[m] = pw / (fact * dfact);
  }
  return b;
}

}  // namespace

BesselJ1 bessel_j1(cplx t) {
  if (std::abs(t) < kSeriesRadius) {
    static const auto b = bessel_series_coefficients();
    const cplx t2 = t * t;
    cplx j = 0.0, dj = 0.0, d2j = 0.0;
    for (int m = kBesselSeriesTerms - 1; m >= 0; --m) {
      j = j * t2 + b[m];
      dj = dj * t2 + static_cast<double>(2 * m + 1) * b[m];
      if (m > 0) d2j = d2j * t2 + static_cast<double>((2 * m + 1) * (2 * m)) * b[m];
    }
    // j = sum b t^{2m}, times t; dj already in t^{2m}; d2j in t^{2m-2}, times t.
    return {ScaledComplex(j * t), ScaledComplex(dj), ScaledComplex(d2j * t)};
  }
  const ScaledComplex s = scaled_sin(t);
  const ScaledComplex c = scaled_cos(t);
  const cplx inv = 1.0 / t;
  const cplx inv2 = inv * inv;
  BesselJ1 out;
  out.j1 = s * ScaledComplex(inv2) - c * ScaledComplex(inv);
  out.dj1 = s * ScaledComplex(inv - 2.0 * inv2 * inv) + c * ScaledComplex(2.0 * inv2);
  // Bessel equation: t^2 j'' + 2t j' + (t^2 - 2) j = 0.
  out.d2j1 = -(ScaledComplex(2.0 * inv) * out.dj1) - ScaledComplex(1.0 - 2.0 * inv2) * out.j1;
  return out;
}

double DeterminantValue::relative_magnitude() const {
  if (value.is_zero()) return 0.0;
  return std::exp(logabs - log_term_scale);
}

DeterminantValue eval_D(const RefractionProfile& profile, cplx k, bool want_dk,
                        const SolverOptions& options) {
  const RadialSolution sol = solve_y(profile, k, want_dk, options);
  const BesselJ1 bj = bessel_j1(k);
  const ScaledComplex mk(-k);

  const ScaledComplex t1 = mk * sol.y1 * bj.dj1;
  const ScaledComplex t2 = sol.dy1 * bj.j1;
  const ScaledComplex t3 = -(sol.y1 * bj.j1);

  DeterminantValue out;
  out.k = k;
  out.value = t1 + t2 + t3;
  out.logabs = out.value.log_abs();
  out.log_term_scale = max_log_abs({t1, t2, t3});
  out.limit_branch = sol.limit_branch;
  if (want_dk) {
    const ScaledComplex& dky = *sol.dk_y1;
    const ScaledComplex& dkdy = *sol.dk_dy1;
    ScaledComplex d = -(sol.y1 * bj.dj1);
    d += mk * dky * bj.dj1;
    d += mk * sol.y1 * bj.d2j1;
    d += dkdy * bj.j1;
    d += sol.dy1 * bj.dj1;
    d -= dky * bj.j1;
    d -= sol.y1 * bj.dj1;
    out.derivative = d;
  }
  return out;
}

DeterminantValue eval_scriptD(const RefractionProfile& profile, cplx k,
                              const SolverOptions& options) {
  if (k == cplx(0.0, 0.0)) throw DomainError("scaled determinant is undefined at k = 0");
  DeterminantValue out = eval_D(profile, k, false, options);
  const ScaledComplex factor(k * k * k * k / 3.0);
  out.value *= factor;
  out.logabs = out.value.log_abs();
  out.log_term_scale += factor.log_abs();
  return out;
}

ScaledComplex factored_leading_form(cplx k, double b) {
  const ScaledComplex sk = scaled_sin(k), ck = scaled_cos(k);
  const ScaledComplex sb = scaled_sin(b * k), cb = scaled_cos(b * k);
  const ScaledComplex kk(k), k2(k * k), k2m1(k * k - 1.0);
  return cb * (kk * ck + k2m1 * sk) + sb * (kk * sk - k2 * ck);
}

NullPair null_pair(const RefractionProfile& profile, cplx k_star, const SolverOptions& options) {
  if (k_star == cplx(0.0, 0.0)) throw DomainError("null pair is undefined at k = 0");
  const DeterminantValue dv = eval_D(profile, k_star, false, options);
  if (!(dv.relative_magnitude() <= kEigenvalueThreshold)) {
    throw NotAnEigenvalue("|D(k)| relative to term scale is " +
                          std::to_string(dv.relative_magnitude()));
  }
  const RadialSolution sol = solve_y(profile, k_star, false, options);
  const BesselJ1 bj = bessel_j1(k_star);

  // Unknowns (a, b):  -j1(k) a + y(1) b = 0,  -k j1'(k) a + (y'(1) - y(1)) b = 0.
  const std::array<std::array<ScaledComplex, 2>, 2> m{{
      {-bj.j1, sol.y1},
      {-(ScaledComplex(k_star) * bj.dj1), sol.dy1 - sol.y1},
  }};
  std::array<double, 2> col_log{};
  for (int j = 0; j < 2; ++j) col_log[j] = std::max(m[0][j].log_abs(), m[1][j].log_abs());

  Eigen::Matrix2cd scaled;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      scaled(i, j) = (m[i][j] * ScaledComplex::exp(cplx(-col_log[j], 0.0))).to_complex();
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::Vector2cd v = svd.matrixV().col(1);

  // Undo the column scaling and renormalize in scaled arithmetic.
  ScaledComplex a = ScaledComplex(v(0)) * ScaledComplex::exp(cplx(-col_log[0], 0.0));
  ScaledComplex b = ScaledComplex(v(1)) * ScaledComplex::exp(cplx(-col_log[1], 0.0));
  const double big = std::max(a.log_abs(), b.log_abs());
  const ScaledComplex unscale = ScaledComplex::exp(cplx(-big, 0.0));
  cplx av = (a * unscale).to_complex();
  cplx bv = (b * unscale).to_complex();
  const double norm = std::sqrt(std::norm(av) + std::norm(bv));
  av /= norm;
  bv /= norm;
  const cplx pivot = std::abs(av) > 0.0 ? av : bv;
  const cplx gauge = std::conj(pivot) / std::abs(pivot);
  av *= gauge;
  bv *= gauge;
  if (std::abs(av) > 0.0) av = cplx(av.real(), 0.0);

  NullPair out{av, bv, 0.0};
  const ScaledComplex sa(av), sb(bv);
  for (int i = 0; i < 2; ++i) {
    const ScaledComplex lhs = m[i][0] * sa + m[i][1] * sb;
    const double denom_log = std::max((m[i][0] * sa).log_abs(), (m[i][1] * sb).log_abs());
    if (!std::isfinite(denom_log)) continue;
    out.residual = std::max(out.residual, std::exp(lhs.log_abs() - denom_log));
  }
  return out;
}

}  // namespace ite
