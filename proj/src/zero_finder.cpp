#include "ite/zero_finder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <unordered_map>

#include <boost/math/tools/roots.hpp>

#include "ite/determinant.hpp"
#include "ite/errors.hpp"
#include "ite/parallel.hpp"

namespace ite {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClusterRadius = 1e-7;
constexpr int kPartitionVariants = 8;
constexpr int kMaxLevels = 80;

using PointFn = std::function<Sample(cplx)>;

// Memoizes boundary samples keyed on exact coordinates.
class SampleCache {
 public:
  explicit SampleCache(SampleFn f) : f_(std::move(f)) {}

  Sample operator()(cplx k) {
    const Key key = make_key(k);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    Sample s = f_(k, false);
    std::lock_guard<std::mutex> lock(mutex_);
    // Counted on insertion so the tally does not depend on thread interleaving.
    if (map_.emplace(key, s).second) ++evaluations_;
    return s;
  }

  long evaluations() const { return evaluations_.load(); }

 private:
  struct Key {
    std::uint64_t re, im;
    bool operator==(const Key& o) const { return re == o.re && im == o.im; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>()(k.re * 0x9E3779B97F4A7C15ULL ^ k.im);
    }
  };
  static Key make_key(cplx k) {
    Key key{};
    const double re = k.real() + 0.0;  // folds -0 into +0
    const double im = k.imag() + 0.0;
    std::memcpy(&key.re, &re, sizeof re);
    std::memcpy(&key.im, &im, sizeof im);
    return key;
  }

  SampleFn f_;
  std::mutex mutex_;
  std::unordered_map<Key, Sample, KeyHash> map_;
  std::atomic<long> evaluations_{0};
};

void check_boundary_sample(const Sample& s, cplx k, const WindingOptions& opt) {
  const cplx m = s.value.mantissa();
  if (s.value.is_zero() || !std::isfinite(m.real()) || !std::isfinite(m.imag())) {
    throw BoundaryZero("function vanishes on the boundary near k = (" +
                       std::to_string(k.real()) + ", " + std::to_string(k.imag()) + ")");
  }
  if (std::isfinite(s.log_scale) &&
      s.value.log_abs() - s.log_scale < std::log(opt.rel_floor)) {
    throw BoundaryZero("boundary value below relative floor near k = (" +
                       std::to_string(k.real()) + ", " + std::to_string(k.imag()) + ")");
  }
}

double segment_phase(const PointFn& f, cplx p, const Sample& fp, cplx q, const Sample& fq,
                     int depth, const WindingOptions& opt) {
  const double d = std::arg(fq.value.mantissa() / fp.value.mantissa());
  const double dm = fq.value.log_abs() - fp.value.log_abs();
  if (std::abs(d) < 0.5 * kPi && std::abs(dm) < 0.5 * kPi) return d;
  if (depth >= opt.max_depth) {
    throw BoundaryZero("phase continuation did not resolve near k = (" +
                       std::to_string(p.real()) + ", " + std::to_string(p.imag()) + ")");
  }
  const cplx mid = 0.5 * (p + q);
  const Sample fm = f(mid);
  check_boundary_sample(fm, mid, opt);
  return segment_phase(f, p, fp, mid, fm, depth + 1, opt) +
         segment_phase(f, mid, fm, q, fq, depth + 1, opt);
}

// Ascending coordinates from u0 to u1 inclusive.
std::vector<double> edge_coordinates(double u0, double u1, int samples0, double spacing) {
  std::vector<double> out;
  const double len = u1 - u0;
  samples0 = std::max(samples0, 1);
  if (spacing <= 0.0) {
    out.reserve(samples0 + 1);
    for (int i = 0; i < samples0; ++i) out.push_back(u0 + len * i / samples0);
    out.push_back(u1);
    return out;
  }
  double s = spacing;
  while (len / s < samples0) s *= 0.5;
  out.push_back(u0);
  const double guard = 1e-3 * s;
  for (double j = std::floor(u0 / s) + 1.0;; j += 1.0) {
    const double x = j * s;
    if (x >= u1 - guard) break;
    if (x > u0 + guard) out.push_back(x);
  }
  out.push_back(u1);
  return out;
}

int winding_core(const PointFn& f, const BoxRegion& box, int samples0, const WindingOptions& opt) {
  const cplx corners[4] = {{box.re_min, box.im_min},
                           {box.re_max, box.im_min},
                           {box.re_max, box.im_max},
                           {box.re_min, box.im_max}};
  Sample corner_values[4];
  for (int c = 0; c < 4; ++c) {
    corner_values[c] = f(corners[c]);
    check_boundary_sample(corner_values[c], corners[c], opt);
  }
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[(e + 1) % 4];
    const bool horizontal = (e % 2 == 0);
    const double u0 = horizontal ? a.real() : a.imag();
    const double u1 = horizontal ? b.real() : b.imag();
    std::vector<double> coords =
        edge_coordinates(std::min(u0, u1), std::max(u0, u1), samples0, opt.lattice_spacing);
    if (u0 > u1) std::reverse(coords.begin(), coords.end());
    cplx prev = a;
    Sample prev_value = corner_values[e];
    for (std::size_t i = 1; i < coords.size(); ++i) {
      const bool last = (i + 1 == coords.size());
      const cplx pt = last ? b
                           : (horizontal ? cplx(coords[i], a.imag()) : cplx(a.real(), coords[i]));
      Sample val;
      if (last) {
        val = corner_values[(e + 1) % 4];
      } else {
        val = f(pt);
        check_boundary_sample(val, pt, opt);
      }
      total += segment_phase(f, prev, prev_value, pt, val, 0, opt);
      prev = pt;
      prev_value = val;
    }
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) throw BoundaryZero("boundary phase did not close");
  return static_cast<int>(rounded);
}

// Four children: slabs along a long axis, otherwise a 2x2 grid.
std::vector<BoxRegion> partition(const BoxRegion& b, int variant) {
  static constexpr double kShift[kPartitionVariants] = {0.0371, -0.0553, 0.0719, -0.0917,
                                                        0.1129, -0.1301, 0.1493, -0.1657};
  const double d = kShift[variant % kPartitionVariants];
  const double aspect = b.width() / b.height();
  std::vector<BoxRegion> out;
  if (aspect > 2.0) {
    double cuts[5] = {b.re_min, 0, 0, 0, b.re_max};
    for (int i = 1; i < 4; ++i) cuts[i] = b.re_min + b.width() * (0.25 * i + 0.25 * d);
    for (int i = 0; i < 4; ++i) out.push_back({cuts[i], cuts[i + 1], b.im_min, b.im_max});
  } else if (aspect < 0.5) {
    double cuts[5] = {b.im_min, 0, 0, 0, b.im_max};
    for (int i = 1; i < 4; ++i) cuts[i] = b.im_min + b.height() * (0.25 * i + 0.25 * d);
    for (int i = 0; i < 4; ++i) out.push_back({b.re_min, b.re_max, cuts[i], cuts[i + 1]});
  } else {
    const double xs = b.re_min + b.width() * (0.5 + d);
    const double ys = b.im_min + b.height() * (0.5 + 0.8 * d);
    out.push_back({b.re_min, xs, b.im_min, ys});
    out.push_back({xs, b.re_max, b.im_min, ys});
    out.push_back({b.re_min, xs, ys, b.im_max});
    out.push_back({xs, b.re_max, ys, b.im_max});
  }
  return out;
}

double relative_residual(const Sample& s) {
  if (s.value.is_zero()) return 0.0;
  if (!std::isfinite(s.log_scale)) return std::abs(s.value.to_complex());
  return std::exp(s.value.log_abs() - s.log_scale);
}

RefineResult muller(const SampleFn& f, cplx k, double tol, int max_iter) {
  const double ref = f(k, false).value.log_abs();
  const ScaledComplex unscale = ScaledComplex::exp(cplx(std::isfinite(ref) ? -ref : 0.0, 0.0));
  auto g = [&](cplx x) { return (f(x, false).value * unscale).to_complex(); };
  const double h = 1e-3 * (1.0 + std::abs(k));
  cplx x0 = k + h, x1 = k - h, x2 = k;
  cplx f0 = g(x0), f1 = g(x1), f2 = g(x2);
  for (int it = 1; it <= max_iter; ++it) {
    if (f2 == cplx(0.0, 0.0)) return {x2, it, 0.0, true, 0};
    const cplx q = (x2 - x1) / (x1 - x0);
    const cplx a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
    const cplx b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
    const cplx c = (1.0 + q) * f2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    if (den == cplx(0.0, 0.0)) break;
    const cplx x3 = x2 - (x2 - x1) * 2.0 * c / den;
    if (!std::isfinite(x3.real()) || !std::isfinite(x3.imag())) break;
    if (std::abs(x3 - x2) < tol) return {x3, it, 0.0, true, 0};
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = g(x3);
  }
  throw NoConvergence("Muller iteration did not converge");
}

}  // namespace

BoxRegion BoxRegion::make(double re_min, double re_max, double im_min, double im_max) {
  if (!(re_min < re_max) || !(im_min < im_max)) {
    throw DomainError("box requires re_min < re_max and im_min < im_max");
  }
  return {re_min, re_max, im_min, im_max};
}

bool BoxRegion::contains(cplx k, double slack) const {
  return k.real() >= re_min - slack && k.real() <= re_max + slack &&
         k.imag() >= im_min - slack && k.imag() <= im_max + slack;
}

BoxRegion BoxRegion::dilated(double factor) const {
  const cplx c = center();
  const double hw = 0.5 * width() * factor;
  const double hh = 0.5 * height() * factor;
  return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

BoxRegion BoxRegion::around(cplx c, double h) {
  return make(c.real() - h, c.real() + h, c.imag() - h, c.imag() + h);
}

int ZeroSet::multiplicity_sum() const {
  int s = 0;
  for (const Zero& z : zeros) s += z.multiplicity;
  return s;
}

int winding_number(const ValueFn& f, const BoxRegion& box, int samples0) {
  PointFn g = [&f](cplx k) {
    return Sample{f(k), -std::numeric_limits<double>::infinity(), std::nullopt};
  };
  return winding_core(g, box, samples0, WindingOptions{});
}

int winding_number(const SampleFn& f, const BoxRegion& box, int samples0,
                   const WindingOptions& options) {
  PointFn g = [&f](cplx k) { return f(k, false); };
  return winding_core(g, box, samples0, options);
}

RefineResult refine_root(const SampleFn& f, cplx k0, double tol, int multiplicity, int max_iter,
                         const BoxRegion* fence) {
  cplx k = k0;
  double previous_step = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const Sample s = f(k, true);
    if (s.value.is_zero()) return {k, it, 0.0, false, 0};
    const bool usable = s.derivative && !s.derivative->is_zero() &&
                        std::isfinite(s.derivative->mantissa().real());
    cplx step;
    if (usable) step = static_cast<double>(multiplicity) * (s.value / *s.derivative).to_complex();
    if (!usable || !std::isfinite(step.real()) || !std::isfinite(step.imag())) {
      RefineResult r = muller(f, k, tol, max_iter);
      r.residual = relative_residual(f(r.k, false));
      return r;
    }
    k -= step;
    if (fence && !fence->contains(k)) throw NoConvergence("Newton iterate left the search box");
    const double size = std::abs(step);
    // Converged, or stalled at the evaluation noise floor.
    if (size < tol || (size < 100.0 * tol && size >= 0.5 * previous_step)) {
      return {k, it, relative_residual(f(k, false)), false, 0};
    }
    previous_step = size;
  }
  throw NoConvergence("Newton iteration did not converge");
}

SampleFn determinant_sampler(const RefractionProfile& profile, const SolverOptions& options) {
  return [profile, options](cplx k, bool want_derivative) {
    DeterminantValue d = eval_D(profile, k, want_derivative, options);
    return Sample{d.value, d.log_term_scale, d.derivative};
  };
}

RefineResult refine_zero(const RefractionProfile& profile, cplx k0, double tol,
                         const ZeroFinderOptions& options) {
  const SampleFn f = determinant_sampler(profile, options.solver);
  RefineResult r = refine_root(f, k0, tol);
  try {
    r.confirmation_winding =
        winding_number(f, BoxRegion::around(r.k, 10.0 * tol), 8, options.winding);
  } catch (const BoundaryZero&) {
    r.confirmation_winding = -1;
  }
  return r;
}

int complete_symmetry(std::vector<Zero>& zeros, const BoxRegion& region, double cluster_radius) {
  struct Group {
    cplx rep;
    int multiplicity;
    double residual;
    double confirm_radius;
  };
  std::vector<Group> groups;
  for (const Zero& z : zeros) {
    cplx c(std::abs(z.k.real()), std::abs(z.k.imag()));
    if (z.multiplicity == 1 && c.imag() <= cluster_radius * (1.0 + std::abs(c))) c.imag(0.0);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return std::abs(g.rep - c) <= cluster_radius * (1.0 + std::abs(c));
    });
    if (it == groups.end()) {
      groups.push_back({c, z.multiplicity, z.residual, z.confirm_radius});
    } else {
      it->multiplicity = std::max(it->multiplicity, z.multiplicity);
      it->residual = std::min(it->residual, z.residual);
      it->confirm_radius = std::max(it->confirm_radius, z.confirm_radius);
    }
  }
  std::vector<Zero> out;
  for (const Group& g : groups) {
    cplx images[4] = {g.rep, std::conj(g.rep), -g.rep, -std::conj(g.rep)};
    for (int i = 0; i < 4; ++i) {
      images[i] = cplx(images[i].real() + 0.0, images[i].imag() + 0.0);
      bool seen = false;
      for (int j = 0; j < i; ++j) seen = seen || images[j] == images[i];
      if (seen || !region.contains(images[i])) continue;
      out.push_back({images[i], g.multiplicity, g.residual, g.confirm_radius});
    }
  }
  int added = 0;
  for (const Zero& z : out) {
    const bool found = std::any_of(zeros.begin(), zeros.end(), [&](const Zero& o) {
      return std::abs(o.k - z.k) <= cluster_radius * (1.0 + std::abs(z.k));
    });
    if (!found) ++added;
  }
  std::sort(out.begin(), out.end(), [](const Zero& a, const Zero& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  });
  zeros = std::move(out);
  return added;
}

ZeroSet find_zeros_of(const SampleFn& f, const BoxRegion& region, const ZeroFinderOptions& opt) {
  SampleCache cache(f);
  const PointFn cached = [&cache](cplx k) { return cache(k); };
  const WindingOptions& wopt = opt.winding;
  auto wind = [&](const BoxRegion& b) { return winding_core(cached, b, opt.samples0, wopt); };

  ZeroSet out;
  BoxRegion top = region;
  int top_winding = 0;
  for (int dil = 0;; ++dil) {
    try {
      top_winding = wind(top);
      out.dilations = dil;
      break;
    } catch (const BoundaryZero&) {
      if (dil + 1 > opt.max_dilations) throw;
      top = region.dilated(std::pow(opt.dilation, dil + 1));
    }
  }
  out.region = top;
  out.total_winding = top_winding;
  if (top_winding < 0) throw Unresolved("negative winding number for the search region");

  struct Item {
    BoxRegion box;
    int winding;
  };
  struct Outcome {
    std::vector<Zero> zeros;
    std::vector<Item> children;
    std::vector<UnresolvedBox> unresolved;
  };

  auto try_newton = [&](const Item& item) -> std::optional<Zero> {
    const BoxRegion fence = item.box.dilated(1.5);
    try {
      const RefineResult r = refine_root(f, item.box.center(), opt.tol, 1, 50, &fence);
      if (!item.box.contains(r.k, 1e-9 * (1.0 + std::abs(r.k)))) return std::nullopt;
      const double limit = 0.25 * std::min(item.box.width(), item.box.height());
      for (double radius = 10.0 * opt.tol; radius <= limit; radius *= 10.0) {
        try {
          const int cw = winding_number(f, BoxRegion::around(r.k, radius), 8, wopt);
          if (cw != 1) return std::nullopt;
          return Zero{r.k, 1, r.residual, radius};
        } catch (const BoundaryZero&) {
          // under the noise floor this close to k; widen
        }
      }
    } catch (const NoConvergence&) {
    } catch (const BoundaryZero&) {
    }
    return std::nullopt;
  };

  // One zero carrying the box's winding, placed by multiplicity-aware Newton.
  auto cluster = [&](const Item& item, Outcome& oc, bool flag) {
    Zero z{item.box.center(), item.winding, 0.0};
    try {
      const RefineResult r = refine_root(f, item.box.center(), opt.tol, item.winding);
      if (item.box.contains(r.k)) {
        z.k = r.k;
        z.residual = r.residual;
      } else {
        z.residual = relative_residual(f(z.k, false));
      }
    } catch (const NoConvergence&) {
      z.residual = relative_residual(f(z.k, false));
    }
    oc.zeros.push_back(z);
    if (flag) oc.unresolved.push_back({item.box, item.winding});
  };

  auto process = [&](const Item& item) {
    Outcome oc;
    if (item.winding == 0) return oc;
    const double max_side = std::max(item.box.width(), item.box.height());
    if (max_side <= opt.origin_box && item.box.contains(cplx(0.0, 0.0)) &&
        f(cplx(0.0, 0.0), false).value.is_zero()) {
      oc.zeros.push_back({cplx(0.0, 0.0), item.winding, 0.0});
      return oc;
    }
    if (item.winding == 1 && max_side <= opt.newton_box) {
      if (auto z = try_newton(item)) {
        oc.zeros.push_back(*z);
        return oc;
      }
    }
    if (max_side <= opt.min_box) {
      cluster(item, oc, item.winding > 1);
      return oc;
    }
    for (int variant = 0; variant < kPartitionVariants; ++variant) {
      try {
        const std::vector<BoxRegion> parts = partition(item.box, variant);
        std::vector<Item> children;
        int sum = 0;
        for (const BoxRegion& p : parts) {
          const int w = wind(p);
          if (w < 0) throw BoundaryZero("negative child winding");
          sum += w;
          if (w > 0) children.push_back({p, w});
        }
        if (sum == item.winding) {
          oc.children = std::move(children);
          return oc;
        }
      } catch (const BoundaryZero&) {
      }
    }
    // Every cut runs under the floor: f is tiny across the box, which happens
    // around a multiple zero long before min_box.
    cluster(item, oc, true);
    return oc;
  };

  std::vector<Item> level{{top, top_winding}};
  std::vector<Zero> zeros;
  for (int depth = 0; !level.empty(); ++depth) {
    if (depth > kMaxLevels) {
      for (const Item& it : level) out.unresolved.push_back({it.box, it.winding});
      break;
    }
    std::vector<Outcome> outcomes(level.size());
    parallel_for(level.size(), [&](std::size_t i) { outcomes[i] = process(level[i]); });
    std::vector<Item> next;
    for (Outcome& oc : outcomes) {
      zeros.insert(zeros.end(), oc.zeros.begin(), oc.zeros.end());
      next.insert(next.end(), oc.children.begin(), oc.children.end());
      out.unresolved.insert(out.unresolved.end(), oc.unresolved.begin(), oc.unresolved.end());
    }
    level = std::move(next);
  }

  std::sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  });
  out.zeros = std::move(zeros);
  out.evaluations = cache.evaluations();
  return out;
}

bool is_degenerate(const RefractionProfile& profile, const BoxRegion& region,
                   const ZeroFinderOptions& options) {
  std::mt19937_64 rng(0x1735eedULL);
  std::uniform_real_distribution<double> ure(region.re_min, region.re_max);
  std::uniform_real_distribution<double> uim(region.im_min, region.im_max);
  std::vector<cplx> probes(options.degenerate_samples);
  for (cplx& k : probes) k = cplx(ure(rng), uim(rng));
  const auto rel = parallel_map<double>(probes.size(), [&](std::size_t i) {
    return eval_D(profile, probes[i], false, options.solver).relative_magnitude();
  });
  return std::all_of(rel.begin(), rel.end(),
                     [&](double r) { return r < options.degenerate_floor; });
}

// Phase of D turns at most about (1 + B) per unit length away from zeros,
// so a lattice at half that spacing keeps edge samples from aliasing.
ZeroFinderOptions with_type_lattice(const RefractionProfile& profile, ZeroFinderOptions options) {
  if (options.winding.lattice_spacing <= 0.0) {
    options.winding.lattice_spacing = 0.5 / (1.0 + compute_liouville(profile).optical_radius());
  }
  return options;
}

ZeroSet find_zeros(const RefractionProfile& profile, const BoxRegion& region,
                   const ZeroFinderOptions& options) {
  validate(profile);
  if (is_degenerate(profile, region, options)) {
    throw DegenerateProfile("D vanishes identically for profile " + profile.canonical());
  }
  ZeroSet zs = find_zeros_of(determinant_sampler(profile, options.solver), region,
                             with_type_lattice(profile, options));
  zs.profile_id = profile.content_hash();
  if (options.symmetry_completion) {
    zs.completed_by_symmetry = complete_symmetry(zs.zeros, zs.region, kClusterRadius);
  }
  return zs;
}

RealAxisResult real_axis_zeros(const RefractionProfile& profile, double k_max,
                               const ZeroFinderOptions& options) {
  if (!(k_max > 0.0)) throw DomainError("real_axis_zeros requires k_max > 0");
  validate(profile);
  const double b = compute_liouville(profile).optical_radius();
  const double step = 0.75 * kPi / (2.0 * (1.0 + b));
  const double k_lo = 0.5 * step;
  RealAxisResult res;
  const double half_height = std::min(0.25, step);
  const BoxRegion nominal = BoxRegion::make(k_lo, k_max, -half_height, half_height);
  res.strip = nominal;
  if (is_degenerate(profile, BoxRegion::make(k_lo, std::max(k_max, k_lo + 1.0), -1.0, 1.0),
                    options)) {
    res.degenerate = true;
    return res;
  }

  const SampleFn f = determinant_sampler(profile, options.solver);
  const ZeroFinderOptions lattice = with_type_lattice(profile, options);
  for (int dil = 0;; ++dil) {
    try {
      res.strip_winding = winding_number(f, res.strip, options.samples0, lattice.winding);
      break;
    } catch (const BoundaryZero&) {
      if (dil + 1 > options.max_dilations) throw;
      res.strip = nominal.dilated(std::pow(options.dilation, dil + 1));
    }
  }

  const double lo = res.strip.re_min, hi = res.strip.re_max;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = (i == n) ? hi : lo + (hi - lo) * i / n;
  auto real_d = [&](double x) { return eval_D(profile, x, false, options.solver).value.to_complex().real(); };
  const std::vector<double> vals =
      parallel_map<double>(grid.size(), [&](std::size_t i) { return real_d(grid[i]); });

  std::vector<std::pair<double, double>> brackets;
  std::vector<double> exact;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (vals[i + 1] == 0.0) {
      exact.push_back(grid[i + 1]);
    } else if (vals[i] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0)) {
      brackets.emplace_back(grid[i], grid[i + 1]);
    }
  }
  const std::vector<double> polished = parallel_map<double>(brackets.size(), [&](std::size_t i) {
    auto [a, c] = brackets[i];
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(
        real_d, a, c, boost::math::tools::eps_tolerance<double>(40), iters);
    double x = 0.5 * (br.first + br.second);
    try {
      const RefineResult r = refine_root(f, cplx(x, 0.0), options.tol);
      if (r.k.real() >= a && r.k.real() <= c) x = r.k.real();
    } catch (const NoConvergence&) {
    }
    return x;
  });
  std::vector<double> all = polished;
  all.insert(all.end(), exact.begin(), exact.end());
  std::sort(all.begin(), all.end());
  res.strip_mismatch = static_cast<int>(all.size()) != res.strip_winding;
  for (double x : all) {
    if (x > 0.0 && x <= k_max) res.roots.push_back(x);
  }
  return res;
}

}  // namespace ite
