#include "ite/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "ite/errors.hpp"
#include "ite/parallel.hpp"

namespace ite {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinSpectrumForB = 20;

bool modulus_order(cplx a, cplx b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::string format_k(cplx k) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << k.real() << ", " << k.imag() << ")";
  return os.str();
}

struct MatchResult {
  int pairs = 0;
  double max_distance = 0.0;
  std::vector<cplx> unmatched;  // from either side
};

MatchResult greedy_match(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  struct Candidate {
    double dist;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(a[i] - b[j]);
      if (d <= tol * (1.0 + std::abs(a[i]))) cands.push_back({d, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return x.dist != y.dist ? x.dist < y.dist : (x.i != y.i ? x.i < y.i : x.j < y.j);
  });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  MatchResult m;
  for (const Candidate& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    ++m.pairs;
    m.max_distance = std::max(m.max_distance, c.dist);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!used_a[i]) m.unmatched.push_back(a[i]);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) m.unmatched.push_back(b[j]);
  }
  return m;
}

double nearest_distance(cplx k, const std::vector<cplx>& others) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& o : others) best = std::min(best, std::abs(k - o));
  return best;
}

}  // namespace

Spectrum Spectrum::make(std::vector<cplx> eigenvalues, const Wedge& wedge, double r_max) {
  if (!(r_max > 0.0)) throw DomainError("spectrum r_max must be positive");
  for (const cplx& k : eigenvalues) {
    if (!wedge.contains(k) || std::abs(k) > r_max) {
      throw DomainError("eigenvalue " + format_k(k) + " lies outside the spectrum wedge/radius");
    }
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), modulus_order);
  return {std::move(eigenvalues), wedge, r_max};
}

Spectrum Spectrum::from_zero_set(const ZeroSet& zs, const Wedge& wedge, double r_max) {
  counting_function(zs, wedge, r_max);  // coverage check
  std::vector<cplx> ev;
  for (const Zero& z : zs.zeros) {
    if (z.k == cplx(0.0, 0.0) || std::abs(z.k) > r_max || !wedge.contains(z.k)) continue;
    for (int m = 0; m < z.multiplicity; ++m) ev.push_back(z.k);
  }
  return make(std::move(ev), wedge, r_max);
}

BRecovery recover_B(const Spectrum& spectrum, std::pair<double, double> window) {
  const auto [lo, hi] = window;
  const auto in_window = std::count_if(
      spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), [&](const cplx& k) {
        return std::abs(k) > lo && std::abs(k) <= hi;
      });
  if (in_window < kMinSpectrumForB) {
    throw InsufficientData("B recovery needs at least 20 eigenvalues in the window, found " +
                           std::to_string(in_window));
  }
  if (hi > spectrum.r_max * (1.0 + 1e-12)) {
    throw RegionTooSmall("fit window extends beyond the spectrum radius");
  }
  BRecovery out;
  out.density = density_from_points(spectrum.eigenvalues, spectrum.wedge, window);
  out.b_hat = kPi * out.density.delta_hat - 1.0;
  out.fit_error = kPi * out.density.fit_error;
  return out;
}

std::string to_string(UniquenessVerdict::Conclusion c) {
  switch (c) {
    case UniquenessVerdict::Conclusion::ConsistentWithEqual: return "ConsistentWithEqual";
    case UniquenessVerdict::Conclusion::Distinguished: return "Distinguished";
    case UniquenessVerdict::Conclusion::Inconclusive: break;
  }
  return "Inconclusive";
}

UniquenessVerdict compare_spectra(const Spectrum& s1, const Spectrum& s2, double pair_tol,
                                  std::optional<std::pair<double, double>> window) {
  if (!(pair_tol > 0.0)) throw DomainError("pair_tol must be positive");
  UniquenessVerdict v;
  const double r = std::min(s1.r_max, s2.r_max);
  // Eigenvalues within the pairing tolerance of the common radius may have
  // their partner just outside the other list.
  auto restrict = [&](const Spectrum& s) {
    std::vector<cplx> out;
    for (const cplx& k : s.eigenvalues) {
      if (std::abs(k) <= r - 10.0 * pair_tol * (1.0 + r)) out.push_back(k);
    }
    return out;
  };
  const std::vector<cplx> a = restrict(s1), b = restrict(s2);
  const MatchResult m = greedy_match(a, b, pair_tol);
  v.matched_pairs = m.pairs;
  v.max_pair_distance = m.max_distance;
  v.unmatched = static_cast<int>(m.unmatched.size());
  for (const cplx& k : m.unmatched) {
    const bool from_a = std::find(a.begin(), a.end(), k) != a.end();
    const double d = nearest_distance(k, from_a ? b : a);
    if (d > 10.0 * pair_tol * (1.0 + std::abs(k))) {
      if (v.far_unmatched == 0) {
        v.witness = "eigenvalue " + format_k(k) + " of spectrum " + (from_a ? "1" : "2") +
                    " has no partner within 10 pair_tol";
      }
      ++v.far_unmatched;
    }
  }

  const auto win = window.value_or(std::make_pair(0.25 * r, r));
  double e1 = 0.0, e2 = 0.0;
  try {
    const BRecovery b1 = recover_B(s1, win);
    v.b1_hat = b1.b_hat;
    e1 = b1.fit_error;
  } catch (const InsufficientData&) {
  }
  try {
    const BRecovery b2 = recover_B(s2, win);
    v.b2_hat = b2.b_hat;
    e2 = b2.fit_error;
  } catch (const InsufficientData&) {
  }
  const bool have_b = v.b1_hat && v.b2_hat;
  v.b_tolerance = e1 + e2;
  const bool b_differs = have_b && std::abs(*v.b1_hat - *v.b2_hat) > v.b_tolerance;
  v.same_b = have_b && !b_differs;

  if (v.far_unmatched > 0 || b_differs) {
    v.conclusion = UniquenessVerdict::Conclusion::Distinguished;
    if (b_differs) {
      std::ostringstream os;
      os.precision(6);
      os << "B estimates differ: " << *v.b1_hat << " vs " << *v.b2_hat << " (tolerance "
         << v.b_tolerance << ")";
      v.witness = v.witness.empty() ? os.str() : v.witness + "; " + os.str();
    }
  } else if (v.unmatched == 0 && v.same_b) {
    v.conclusion = UniquenessVerdict::Conclusion::ConsistentWithEqual;
  } else {
    v.conclusion = UniquenessVerdict::Conclusion::Inconclusive;
  }
  return v;
}

double FValue::relative() const {
  if (f.is_zero()) return 0.0;
  return std::exp(f.log_abs() - log_scale);
}

std::vector<FValue> crosscheck_F(const RefractionProfile& p1, const RefractionProfile& p2,
                                 const std::vector<cplx>& k_list, const SolverOptions& options) {
  return parallel_map<FValue>(k_list.size(), [&](std::size_t i) {
    const cplx k = k_list[i];
    const RadialSolution a = solve_y(p1, k, false, options);
    const RadialSolution b = solve_y(p2, k, false, options);
    const double scale = std::max(a.y1.log_abs(), b.y1.log_abs());
    return FValue{k, a.y1 - b.y1, std::isfinite(scale) ? scale : 0.0};
  });
}

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::Dirichlet ? "dirichlet" : "dirichlet_neumann";
}

std::vector<double> sl_eigenvalues(const PotentialFn& p, double b, BoundaryMode mode,
                                   double k_max, const SolverOptions& options) {
  if (!(b > 0.0)) throw DomainError("sl_eigenvalues requires B > 0");
  if (!(k_max > 0.0)) return {};
  // Normalized as xi^2 near 0 so that the shooting function keeps its sign as k -> 0.
  auto shoot = [&](double k) {
    const ZSolution s = solve_z(p, b, k, 3.0 / k, options);
    const ScaledComplex& v = (mode == BoundaryMode::Dirichlet) ? s.z : s.dz;
    return v.to_complex().real();
  };
  const double step = kPi / (4.0 * b);
  const auto n = static_cast<std::size_t>(std::ceil(k_max / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 0.5 * step + (k_max - 0.5 * step) * i / n;
  grid[n] = k_max;
  const std::vector<double> vals =
      parallel_map<double>(grid.size(), [&](std::size_t i) { return shoot(grid[i]); });

  std::vector<std::pair<double, double>> brackets;
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (vals[i + 1] == 0.0) {
      roots.push_back(grid[i + 1]);
    } else if (vals[i] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0)) {
      brackets.emplace_back(grid[i], grid[i + 1]);
    }
  }
  const std::vector<double> polished = parallel_map<double>(brackets.size(), [&](std::size_t i) {
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(
        shoot, brackets[i].first, brackets[i].second,
        [](double lo, double hi) { return hi - lo <= 1e-12 * hi; }, iters);
    return 0.5 * (br.first + br.second);
  });
  roots.insert(roots.end(), polished.begin(), polished.end());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::remove_if(roots.begin(), roots.end(), [&](double k) { return k > k_max; }),
              roots.end());
  return roots;
}

bool strictly_interlace(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::pair<double, int>> merged;
  for (double x : a) merged.emplace_back(x, 0);
  for (double x : b) merged.emplace_back(x, 1);
  std::sort(merged.begin(), merged.end());
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].second == merged[i - 1].second) return false;
    if (!(merged[i].first > merged[i - 1].first)) return false;
  }
  return true;
}

}  // namespace ite
