#include "ite/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "ite/errors.hpp"

namespace ite {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr int kMinSeriesTerms = 8;
constexpr int kMaxSeriesTerms = 64;
constexpr double kSeriesCutoff = 1e-18;
constexpr double kLn2 = 0.69314718055994530942;

template <std::size_t N>
using State = std::array<cplx, N>;

// Rescales the state by a power of two so the largest component is O(1);
// the factor moves into the shared logscale.
template <std::size_t N>
void renormalize(State<N>& x, double& logscale) {
  double big = 0.0;
  for (const cplx& v : x) big = std::max(big, std::abs(v));
  if (big == 0.0 || !std::isfinite(big)) return;
  int e = 0;
  std::frexp(big, &e);
  if (e == 0) return;
  for (cplx& v : x) v = cplx(std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e));
  logscale += e * kLn2;
}

// Embedded RK 7(8) with mixed abs/rel error control and per-step
// renormalization. Returns the number of accepted steps.
template <std::size_t N, class Rhs>
long integrate(Rhs&& rhs, State<N>& x, double& logscale, double t0, double t1,
               double h_max, double h0, const SolverOptions& opt) {
  odeint::runge_kutta_fehlberg78<State<N>, double, State<N>, double> stepper;
  renormalize(x, logscale);
  double t = t0;
  double h = std::min(h0, h_max);
  long accepted = 0;
  long attempts = 0;
  State<N> xerr{};
  while (t < t1) {
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    const State<N> x_old = x;
    stepper.do_step(rhs, x, t, h, xerr);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double scale =
          opt.atol + opt.rtol * std::max(std::abs(x_old[i]), std::abs(x[i]));
      err = std::max(err, std::abs(xerr[i]) / scale);
    }
    if (!std::isfinite(err)) err = 1e10;
    if (++attempts > opt.max_steps) {
      throw StepUnderflow("step budget exhausted at r = " + std::to_string(t));
    }
    if (err <= 1.0) {
      t = last ? t1 : t + h;
      ++accepted;
      renormalize(x, logscale);
      const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.125));
      h = std::min(h_max, h * std::max(1.0, grow));
    } else {
      x = x_old;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.125));
      if (h < 1e-14 * std::max(1.0, t)) {
        throw StepUnderflow("step size underflow at r = " + std::to_string(t));
      }
    }
  }
  return accepted;
}

}  // namespace

double launch_radius(cplx k) { return std::min(1e-3, 0.1 / (1.0 + std::abs(k))); }

SeriesValue series_init(const RefractionProfile& profile, cplx k, double r0) {
  // y = sum_m a_m r^{m+2},  m (m+3) a_m = -k^2 sum_j n_j a_{m-2-j},  a_0 = k/3.
  const auto& c = profile.coefficients();
  const cplx kk = k * k;
  std::array<cplx, kMaxSeriesTerms> a{};
  std::array<cplx, kMaxSeriesTerms> da{};
  a[0] = k / 3.0;
  da[0] = 1.0 / 3.0;
  SeriesValue out{};
  double rpow = r0 * r0;  // r0^{m+2}
  out.y = a[0] * rpow;
  out.dy = 2.0 * a[0] * r0;
  out.dk_y = da[0] * rpow;
  out.dk_dy = 2.0 * da[0] * r0;
  const double lead = std::abs(out.y) + std::abs(out.dk_y);
  double previous = lead;
  int m = 1;
  for (; m < kMaxSeriesTerms; ++m) {
    cplx conv = 0.0, dconv = 0.0;
    for (int j = 0; j + 2 <= m && j < static_cast<int>(c.size()); ++j) {
      conv += c[j] * a[m - 2 - j];
      dconv += c[j] * da[m - 2 - j];
    }
    const double denom = static_cast<double>(m) * (m + 3);
    a[m] = -kk * conv / denom;
    da[m] = (-2.0 * k * conv - kk * dconv) / denom;
    rpow *= r0;
    out.y += a[m] * rpow;
    out.dy += static_cast<double>(m + 2) * a[m] * (rpow / r0);
    out.dk_y += da[m] * rpow;
    out.dk_dy += static_cast<double>(m + 2) * da[m] * (rpow / r0);
    const double size = std::abs(a[m] * rpow) + std::abs(da[m] * rpow);
    if (m + 1 >= kMinSeriesTerms && size <= kSeriesCutoff * lead &&
        previous <= kSeriesCutoff * lead) {
      break;
    }
    previous = size;
  }
  out.terms = std::min(m + 1, kMaxSeriesTerms);
  return out;
}

RadialSolution solve_y(const RefractionProfile& profile, cplx k, bool want_dk,
                       const SolverOptions& options) {
  if (std::abs(k) > options.k_max) throw DomainError("|k| exceeds configured k_max");
  RadialSolution sol;
  sol.k = k;
  if (k == cplx(0.0, 0.0)) {
    // k -> 0 limit: y vanishes, dy/dk is r^2/3 (n does not enter at k = 0).
    sol.limit_branch = true;
    if (want_dk) {
      sol.dk_y1 = ScaledComplex(1.0 / 3.0);
      sol.dk_dy1 = ScaledComplex(2.0 / 3.0);
    }
    return sol;
  }

  const double r0 = launch_radius(k);
  const SeriesValue s = series_init(profile, k, r0);
  const cplx kk = k * k;
  const double h_max =
      std::min(0.05, 0.5 / (1.0 + std::abs(k) * std::sqrt(profile.max_value())));
  const double h0 = 0.1 * r0;
  double logscale = 0.0;

  if (want_dk) {
    State<4> x{s.y, s.dy, s.dk_y, s.dk_dy};
    auto rhs = [&](const State<4>& v, State<4>& dv, double r) {
      const double n = profile.evaluate_inner(r).n;
      const cplx coef = kk * n - 2.0 / (r * r);
      dv[0] = v[1];
      dv[1] = -coef * v[0];
      dv[2] = v[3];
      dv[3] = -coef * v[2] - 2.0 * k * n * v[0];
    };
    sol.steps = integrate<4>(rhs, x, logscale, r0, 1.0, h_max, h0, options);
    sol.y1 = ScaledComplex(x[0], logscale);
    sol.dy1 = ScaledComplex(x[1], logscale);
    sol.dk_y1 = ScaledComplex(x[2], logscale);
    sol.dk_dy1 = ScaledComplex(x[3], logscale);
  } else {
    State<2> x{s.y, s.dy};
    auto rhs = [&](const State<2>& v, State<2>& dv, double r) {
      const double n = profile.evaluate_inner(r).n;
      dv[0] = v[1];
      dv[1] = -(kk * n - 2.0 / (r * r)) * v[0];
    };
    sol.steps = integrate<2>(rhs, x, logscale, r0, 1.0, h_max, h0, options);
    sol.y1 = ScaledComplex(x[0], logscale);
    sol.dy1 = ScaledComplex(x[1], logscale);
  }
  return sol;
}

ZSolution solve_z(const PotentialFn& p, double b, cplx k, cplx scale,
                  const SolverOptions& options) {
  if (!(b > 0.0)) throw DomainError("solve_z requires B > 0");
  if (std::abs(k) > options.k_max) throw DomainError("|k| exceeds configured k_max");
  ZSolution sol;
  if (k == cplx(0.0, 0.0) || scale == cplx(0.0, 0.0)) return sol;

  const double xi0 = std::min(launch_radius(k), 0.01 * b);
  // Near 0, p = 2/xi^2 + q with q treated as the constant q(xi0):
  // z = sum c_m xi^{m+2}, m (m+3) c_m = -(k^2 - q0) c_{m-2}.
  const double q0 = p(xi0) - 2.0 / (xi0 * xi0);
  const cplx keff2 = k * k - q0;
  cplx c_m = scale * k / 3.0;
  cplx z0 = c_m * xi0 * xi0;
  cplx dz0 = 2.0 * c_m * xi0;
  double xpow = xi0 * xi0;
  for (int m = 2; m < kMaxSeriesTerms; m += 2) {
    c_m = -keff2 * c_m / (static_cast<double>(m) * (m + 3));
    xpow *= xi0 * xi0;
    const cplx term = c_m * xpow;
    z0 += term;
    dz0 += static_cast<double>(m + 2) * term / xi0;
    if (m >= kMinSeriesTerms && std::abs(term) <= kSeriesCutoff * std::abs(z0)) break;
  }

  const cplx kk = k * k;
  State<2> x{z0, dz0};
  auto rhs = [&](const State<2>& v, State<2>& dv, double xi) {
    dv[0] = v[1];
    dv[1] = -(kk - p(xi)) * v[0];
  };
  const double h_max = std::min(0.05, 0.5 / (1.0 + std::abs(k)));
  double logscale = 0.0;
  sol.steps = integrate<2>(rhs, x, logscale, xi0, b, h_max, 0.1 * xi0, options);
  sol.z = ScaledComplex(x[0], logscale);
  sol.dz = ScaledComplex(x[1], logscale);
  return sol;
}

double liouville_scale(const RefractionProfile& profile) {
  return std::pow(profile.evaluate_inner(0.0).n, -0.75);
}

std::pair<ScaledComplex, ScaledComplex> asymptotic_z(cplx k, double xi) {
  if (!(std::abs(k) > 1.0) || !(xi > 0.0)) {
    throw DomainError("asymptotic_z requires |k| > 1 and xi > 0");
  }
  const ScaledComplex s = scaled_sin(k * xi);
  const ScaledComplex c = scaled_cos(k * xi);
  const cplx k2 = k * k;
  const cplx k3 = k2 * k;
  const ScaledComplex z = s * ScaledComplex(3.0 / (k3 * xi)) - c * ScaledComplex(3.0 / k2);
  const ScaledComplex dz = s * ScaledComplex(3.0 / k2 * (k - 1.0 / (k * xi * xi))) +
                           c * ScaledComplex(3.0 / (k2 * xi));
  return {z, dz};
}

}  // namespace ite
