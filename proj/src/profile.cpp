#include "ite/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <utility>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ite/errors.hpp"

namespace ite {

namespace {

constexpr int kPositivityGrid = 4096;
constexpr double kSmoothnessTol = 1e-12;
constexpr int kInitialPanels = 64;
constexpr std::size_t kPanelBudget = 1 << 16;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RefractionProfile::RefractionProfile(Kind kind, double parameter,
                                     std::vector<double> coeffs)
    : kind_(kind), parameter_(parameter), coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidProfile("profile coefficient is not finite");
  }
  for (int i = 0; i <= 256; ++i) {
    max_n_ = std::max(max_n_, evaluate_inner(i / 256.0).n);
  }
}

RefractionProfile RefractionProfile::constant(double value) {
  return RefractionProfile(Kind::Constant, value, {value});
}

RefractionProfile RefractionProfile::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidProfile("polynomial profile needs at least one coefficient");
  return RefractionProfile(Kind::Polynomial, 0.0, std::move(coeffs));
}

RefractionProfile RefractionProfile::smooth_bump(double c) {
  // 1 + c (1 - r^2)^3 = (1 + c) - 3c r^2 + 3c r^4 - c r^6
  return RefractionProfile(Kind::SmoothBump, c,
                           {1.0 + c, 0.0, -3.0 * c, 0.0, 3.0 * c, 0.0, -c});
}

IndexValue RefractionProfile::evaluate_inner(double r) const {
  // Horner for p, p', p'' together.
  double p = 0.0, dp = 0.0, d2p = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    d2p = d2p * r + 2.0 * dp;
    dp = dp * r + p;
    p = p * r + *it;
  }
  return {p, dp, d2p};
}

IndexValue RefractionProfile::evaluate(double r) const {
  if (!(r >= 0.0)) throw DomainError("profile evaluated at negative radius");
  if (r >= 1.0) return {1.0, 0.0, 0.0};
  return evaluate_inner(r);
}

std::string RefractionProfile::canonical() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant:" + format_double(parameter_);
    case Kind::SmoothBump:
      return "smooth_bump:" + format_double(parameter_);
    case Kind::Polynomial: {
      std::string s = "poly:";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ',';
        s += format_double(coeffs_[i]);
      }
      return s;
    }
  }
  return {};
}

std::string RefractionProfile::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ValidationReport validate(const RefractionProfile& profile) {
  ValidationReport rep;
  rep.min_n = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kPositivityGrid; ++i) {
    const double r = static_cast<double>(i) / kPositivityGrid;
    const double n = profile.evaluate_inner(r).n;
    if (n < rep.min_n) {
      rep.min_n = n;
      rep.min_n_at = r;
    }
  }
  rep.positive = rep.min_n > 0.0;
  if (!rep.positive) {
    throw InvalidProfile("refraction index is not positive: n(" +
                         std::to_string(rep.min_n_at) + ") = " + std::to_string(rep.min_n));
  }
  const IndexValue edge = profile.evaluate_inner(1.0);
  rep.jump_n = std::abs(edge.n - 1.0);
  rep.jump_dn = std::abs(edge.dn);
  rep.jump_d2n = std::abs(edge.d2n);
  rep.smoothness_warning = rep.jump_n > kSmoothnessTol || rep.jump_dn > kSmoothnessTol ||
                           rep.jump_d2n > kSmoothnessTol;
  rep.valid = true;
  return rep;
}

LiouvilleMap::LiouvilleMap(RefractionProfile profile, std::vector<double> r_nodes,
                           std::vector<double> xi_nodes, double quad_error)
    : profile_(std::move(profile)),
      r_nodes_(std::move(r_nodes)),
      xi_nodes_(std::move(xi_nodes)),
      quad_error_(quad_error),
      inverse_(boost::math::interpolators::pchip<std::vector<double>>(
          std::vector<double>(xi_nodes_), std::vector<double>(r_nodes_),
          1.0 / std::sqrt(profile_.evaluate_inner(0.0).n),
          1.0 / std::sqrt(profile_.evaluate_inner(1.0).n))) {}

double LiouvilleMap::xi_of_r(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return optical_radius() + (r - 1.0);
  auto it = std::upper_bound(r_nodes_.begin(), r_nodes_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - r_nodes_.begin()) - 1;
  const double r0 = r_nodes_[i];
  if (r == r0) return xi_nodes_[i];
  auto root_n = [this](double s) { return std::sqrt(profile_.evaluate_inner(s).n); };
  return xi_nodes_[i] + boost::math::quadrature::gauss<double, 10>::integrate(root_n, r0, r);
}

double LiouvilleMap::r_of_xi(double xi) const {
  const double b = optical_radius();
  if (xi < 0.0 || xi > b * (1.0 + 1e-14)) {
    throw DomainError("xi outside [0, B] in Liouville inversion");
  }
  if (xi <= 0.0) return 0.0;
  if (xi >= b) return 1.0;
  double r = std::clamp(inverse_(xi), 0.0, 1.0);
  for (int iter = 0; iter < 8; ++iter) {
    const double f = xi_of_r(r) - xi;
    const double step = f / std::sqrt(profile_.evaluate_inner(r).n);
    r = std::clamp(r - step, 0.0, 1.0);
    if (std::abs(step) <= 2e-16 * r) break;
  }
  return r;
}

LiouvilleMap compute_liouville(const RefractionProfile& profile, double quad_tol) {
  if (!(quad_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  validate(profile);
  auto root_n = [&profile](double r) { return std::sqrt(profile.evaluate_inner(r).n); };

  struct Panel {
    double a, b, value, error;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto make_panel = [&](double a, double b) {
    // Kronrod minus embedded Gauss; Boost's own estimate has a floor near 1e-13 relative.
    const double v = GK::integrate(root_n, a, b, 0, 0.0);
    const double g = boost::math::quadrature::gauss<double, 7>::integrate(root_n, a, b);
    return Panel{a, b, v, std::abs(v - g)};
  };

  // Panels are refined until each meets its share of the tolerance.
  std::deque<Panel> pending;
  for (int i = 0; i < kInitialPanels; ++i) {
    pending.push_back(make_panel(static_cast<double>(i) / kInitialPanels,
                                 static_cast<double>(i + 1) / kInitialPanels));
  }
  std::vector<Panel> done;
  while (!pending.empty()) {
    Panel p = pending.front();
    pending.pop_front();
    if (p.error <= quad_tol * (p.b - p.a) || p.b - p.a < 1e-12) {
      done.push_back(p);
      continue;
    }
    if (done.size() + pending.size() + 2 > kPanelBudget) {
      throw QuadratureFailure("Liouville quadrature did not reach tolerance within node budget");
    }
    const double mid = 0.5 * (p.a + p.b);
    pending.push_back(make_panel(p.a, mid));
    pending.push_back(make_panel(mid, p.b));
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });

  std::vector<double> r_nodes{0.0};
  std::vector<double> xi_nodes{0.0};
  double total_error = 0.0;
  for (const Panel& p : done) {
    r_nodes.push_back(p.b);
    xi_nodes.push_back(xi_nodes.back() + p.value);
    total_error += p.error;
  }
  if (total_error > quad_tol) {
    throw QuadratureFailure("Liouville quadrature error estimate exceeds tolerance");
  }
  return LiouvilleMap(profile, std::move(r_nodes), std::move(xi_nodes), total_error);
}

Potential potential(const RefractionProfile& profile, const LiouvilleMap& map, double xi) {
  if (!(xi > 0.0) || xi > map.optical_radius() * (1.0 + 1e-14)) {
    throw DomainError("potential requires 0 < xi <= B");
  }
  const double r = map.r_of_xi(xi);
  const IndexValue v = profile.evaluate_inner(r);
  const double n2 = v.n * v.n;
  Potential out;
  out.p = v.d2n / (4.0 * n2) - (5.0 / 16.0) * v.dn * v.dn / (n2 * v.n) + 2.0 / (r * r * v.n);
  out.q = out.p - 2.0 / (xi * xi);
  return out;
}

PotentialFn make_potential(const RefractionProfile& profile, const LiouvilleMap& map) {
  return [profile, map](double xi) { return potential(profile, map, xi).p; };
}

PotentialFn free_potential() {
  return [](double xi) { return 2.0 / (xi * xi); };
}

PotentialNorms q_norms(const RefractionProfile& profile, const LiouvilleMap& map, int samples) {
  PotentialNorms out;
  const double b = map.optical_radius();
  const double h = b / samples;
  for (int i = 0; i < samples; ++i) {
    const double q = std::abs(potential(profile, map, (i + 0.5) * h).q);
    out.sup = std::max(out.sup, q);
    out.l1 += q * h;
  }
  return out;
}

}  // namespace ite
