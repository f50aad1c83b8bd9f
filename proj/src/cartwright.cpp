#include "ite/cartwright.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "ite/determinant.hpp"
#include "ite/errors.hpp"
#include "ite/parallel.hpp"

namespace ite {

namespace {

constexpr double kPi = std::numbers::pi;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  double max_dev = 0.0;
  double slope_stderr = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
    f.max_dev = std::max(f.max_dev, std::abs(r));
  }
  f.rms = std::sqrt(ss / n);
  if (x.size() > 2 && sxx > 0.0) f.slope_stderr = std::sqrt(ss / (n - 2.0) / sxx);
  return f;
}

// Angle in [0, 2 pi) measured from theta_min.
double offset_from(double theta_min, cplx k) {
  double d = std::arg(k) - theta_min;
  d = std::fmod(d, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d;
}

void require_sector(const ZeroSet& zs, const Wedge& wedge, double inner, double r) {
  if (!(r > inner)) return;
  const BoxRegion need = wedge.sector_bounds(inner, r);
  const double slack = 1e-12 * (1.0 + r);
  if (!zs.region.contains({need.re_min, need.im_min}, slack) ||
      !zs.region.contains({need.re_max, need.im_max}, slack)) {
    throw RegionTooSmall("search region does not cover the wedge sector up to r = " +
                         std::to_string(r));
  }
}

std::vector<double> wedge_moduli(const std::vector<cplx>& points, const std::vector<int>& mult,
                                 const Wedge& wedge) {
  std::vector<double> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == cplx(0.0, 0.0) || !wedge.contains(points[i])) continue;
    for (int m = 0; m < mult[i]; ++m) out.push_back(std::abs(points[i]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DensityEstimate fit_density(const std::vector<double>& moduli,
                            std::pair<double, double> window, int grid_points) {
  const auto [lo, hi] = window;
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("density window requires 0 <= r_lo < r_hi");
  if (grid_points < 2) throw DomainError("density fit needs at least two grid points");
  auto count = [&](double r) {
    return static_cast<int>(std::upper_bound(moduli.begin(), moduli.end(), r) - moduli.begin());
  };
  DensityEstimate est;
  est.fit_window = window;
  est.zeros_in_window = count(hi) - count(lo);
  if (est.zeros_in_window < 10) {
    throw InsufficientData("only " + std::to_string(est.zeros_in_window) +
                           " zeros in the fit window (10 required)");
  }
  std::vector<double> rs(grid_points), ns(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    rs[i] = (i + 1 == grid_points) ? hi : lo + (hi - lo) * i / (grid_points - 1);
    const int c = count(rs[i]);
    ns[i] = c;
    est.counts.emplace_back(rs[i], c);
  }
  const LineFit f = least_squares(rs, ns);
  est.delta_hat = std::max(0.0, f.slope);
  est.intercept = f.intercept;
  est.residual = f.rms;
  est.max_deviation = f.max_dev;
  est.fit_error = 2.0 * f.max_dev / (hi - lo);
  return est;
}

}  // namespace

Wedge Wedge::make(double theta_min, double theta_max, Label label) {
  if (!(theta_min > -kPi && theta_min <= kPi && theta_min < theta_max &&
        theta_max <= theta_min + 2.0 * kPi)) {
    throw DomainError("wedge requires -pi < theta_min < theta_max <= theta_min + 2 pi");
  }
  return {theta_min, theta_max, label};
}

Wedge Wedge::sigma1(double eps) { return make(-eps, eps, Label::Sigma1); }
Wedge Wedge::sigma2(double eps) { return make(kPi - eps, kPi + eps, Label::Sigma2); }
Wedge Wedge::off_axis_upper(double eps) { return make(eps, kPi - eps, Label::OffAxisUpper); }
Wedge Wedge::off_axis_lower(double eps) { return make(-kPi + eps, -eps, Label::OffAxisLower); }

bool Wedge::contains(cplx k) const {
  return offset_from(theta_min, k) <= theta_max - theta_min;
}

BoxRegion Wedge::sector_bounds(double inner, double r) const {
  std::vector<cplx> pts;
  for (double rad : {inner, r}) {
    pts.push_back(std::polar(rad, theta_min));
    pts.push_back(std::polar(rad, theta_max));
  }
  // Extreme points of the outer arc at the axis directions inside the wedge.
  for (int q = -4; q <= 8; ++q) {
    const double a = q * 0.5 * kPi;
    if (a >= theta_min && a <= theta_max) pts.push_back(std::polar(r, a));
  }
  BoxRegion b{pts[0].real(), pts[0].real(), pts[0].imag(), pts[0].imag()};
  for (const cplx& p : pts) {
    b.re_min = std::min(b.re_min, p.real());
    b.re_max = std::max(b.re_max, p.real());
    b.im_min = std::min(b.im_min, p.imag());
    b.im_max = std::max(b.im_max, p.imag());
  }
  return b;
}

std::string to_string(Wedge::Label label) {
  switch (label) {
    case Wedge::Label::Sigma1: return "sigma1";
    case Wedge::Label::Sigma2: return "sigma2";
    case Wedge::Label::OffAxisUpper: return "off_axis_upper";
    case Wedge::Label::OffAxisLower: return "off_axis_lower";
    case Wedge::Label::Custom: break;
  }
  return "custom";
}

Wedge::Label wedge_label_from_string(const std::string& s) {
  if (s == "sigma1") return Wedge::Label::Sigma1;
  if (s == "sigma2") return Wedge::Label::Sigma2;
  if (s == "off_axis_upper") return Wedge::Label::OffAxisUpper;
  if (s == "off_axis_lower") return Wedge::Label::OffAxisLower;
  return Wedge::Label::Custom;
}

int counting_function(const ZeroSet& zs, const Wedge& wedge, double r, double inner_radius) {
  if (!(r >= 0.0)) throw DomainError("counting radius must be non-negative");
  require_sector(zs, wedge, inner_radius, r);
  int n = 0;
  for (const Zero& z : zs.zeros) {
    if (z.k == cplx(0.0, 0.0) || std::abs(z.k) > r || !wedge.contains(z.k)) continue;
    n += z.multiplicity;
  }
  return n;
}

DensityEstimate wedge_density(const ZeroSet& zs, const Wedge& wedge,
                              std::pair<double, double> window, int grid_points) {
  require_sector(zs, wedge, kDefaultInnerRadius, window.second);
  std::vector<cplx> pts;
  std::vector<int> mult;
  for (const Zero& z : zs.zeros) {
    pts.push_back(z.k);
    mult.push_back(z.multiplicity);
  }
  return fit_density(wedge_moduli(pts, mult, wedge), window, grid_points);
}

DensityEstimate density_from_points(const std::vector<cplx>& points, const Wedge& wedge,
                                    std::pair<double, double> window, int grid_points) {
  return fit_density(wedge_moduli(points, std::vector<int>(points.size(), 1), wedge), window,
                     grid_points);
}

IndicatorEstimate indicator_estimate(const RefractionProfile& profile, double theta,
                                     const std::vector<double>& r_samples,
                                     const SolverOptions& options) {
  const double t = std::remainder(theta, 2.0 * kPi);
  const double to_axis = std::min(std::abs(t), kPi - std::abs(t));
  if (to_axis < kIndicatorGuard) {
    throw DomainError("theta lies inside the guard band around the real axis");
  }
  if (r_samples.size() < 4) throw DomainError("indicator fit needs at least four radii");
  for (std::size_t i = 0; i < r_samples.size(); ++i) {
    if (!(r_samples[i] > 0.0) || (i > 0 && !(r_samples[i] > r_samples[i - 1]))) {
      throw DomainError("indicator radii must be positive and increasing");
    }
  }
  const std::vector<double> logabs = parallel_map<double>(r_samples.size(), [&](std::size_t i) {
    return eval_D(profile, std::polar(r_samples[i], theta), false, options).logabs;
  });
  IndicatorEstimate est;
  est.theta = theta;
  for (std::size_t i = 0; i < r_samples.size(); ++i) {
    if (!std::isfinite(logabs[i])) throw DegenerateProfile("D vanishes on the indicator ray");
    est.samples.emplace_back(r_samples[i], logabs[i] / r_samples[i]);
  }
  const std::size_t start = r_samples.size() / 2;
  const std::vector<double> x(r_samples.begin() + start, r_samples.end());
  const std::vector<double> y(logabs.begin() + start, logabs.end());
  const LineFit f = least_squares(x, y);
  est.h_hat = f.slope;
  est.intercept = f.intercept;
  est.fit_error = f.slope_stderr;
  return est;
}

std::vector<double> default_indicator_radii(double r_max, int count) {
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) r[i] = r_max * (0.25 + 0.75 * i / (count - 1));
  return r;
}

IndicatorWidth indicator_width(const RefractionProfile& profile,
                               const std::vector<double>& r_samples,
                               const ZeroFinderOptions& options) {
  if (is_degenerate(profile, BoxRegion::make(0.5, 30.0, -3.0, 3.0), options)) {
    throw DegenerateProfile("D vanishes to the degenerate floor; indicator undefined");
  }
  IndicatorWidth w;
  w.h_upper = indicator_estimate(profile, 0.5 * kPi, r_samples, options.solver).h_hat;
  w.h_lower = indicator_estimate(profile, -0.5 * kPi, r_samples, options.solver).h_hat;
  w.width = w.h_upper + w.h_lower;
  w.b = compute_liouville(profile).optical_radius();
  w.predicted = 2.0 * (1.0 + w.b);
  return w;
}

cplx reciprocal_sum(const ZeroSet& zs, double r) {
  if (!(r > 0.0)) throw DomainError("reciprocal sum radius must be positive");
  if (zs.region.re_min > -r || zs.region.re_max < r) {
    throw RegionTooSmall("search region does not span [-r, r] on the real axis");
  }
  // Terms are grouped by symmetry orbit so that +-k pairs cancel exactly.
  std::map<std::pair<double, double>, cplx> orbits;
  for (const Zero& z : zs.zeros) {
    if (z.k == cplx(0.0, 0.0) || !(std::abs(z.k) < r)) continue;
    orbits[{std::abs(z.k.real()), std::abs(z.k.imag())}] +=
        static_cast<double>(z.multiplicity) / z.k;
  }
  cplx sum(0.0, 0.0);
  for (const auto& [key, v] : orbits) sum += v;
  return sum;
}

}  // namespace ite
