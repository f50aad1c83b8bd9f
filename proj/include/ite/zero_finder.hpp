#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ite/profile.hpp"
#include "ite/radial_solver.hpp"
#include "ite/scaled_complex.hpp"

namespace ite {

struct BoxRegion {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  /// Throws DomainError unless re_min < re_max and im_min < im_max.
  static BoxRegion make(double re_min, double re_max, double im_min, double im_max);

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx k, double slack = 0.0) const;
  /// Same center, half-widths scaled by factor.
  BoxRegion dilated(double factor) const;
  /// Square box of half-width h around c.
  static BoxRegion around(cplx c, double h);
};

/// Function value with the magnitude yardstick used for the relative floor
/// (log_scale = -inf disables the floor).
struct Sample {
  ScaledComplex value;
  double log_scale = 0.0;
  std::optional<ScaledComplex> derivative;
};

using SampleFn = std::function<Sample(cplx k, bool want_derivative)>;
using ValueFn = std::function<ScaledComplex(cplx k)>;

struct WindingOptions {
  int max_depth = 40;       // bisection depth per boundary segment
  double rel_floor = 1e-12; // |f| / scale below this on the boundary is a boundary zero
  // When positive, edge samples sit on the dyadic lattice j * spacing / 2^l so
  // neighbouring boxes share evaluations through a cache. find_zeros and
  // real_axis_zeros use 0.5 / (1 + B) when this is left at zero.
  double lattice_spacing = 0.0;
};

/// Argument-principle count of zeros inside box (with multiplicity).
/// A boundary segment is bisected while log f changes by pi/2 or more across
/// it, in modulus or in phase; a zero close to the contour shows up in the
/// modulus before the sampled phase can alias.
/// Phase continuation along the boundary bisects until every phase step is
/// below pi/2. Throws BoundaryZero when that cannot be achieved.
int winding_number(const ValueFn& f, const BoxRegion& box, int samples0 = 16);
int winding_number(const SampleFn& f, const BoxRegion& box, int samples0,
                   const WindingOptions& options = {});

struct RefineResult {
  cplx k;
  int iterations = 0;
  double residual = 0.0;  // |f(k)| / scale at the result
  bool used_muller = false;
  int confirmation_winding = 0;  // filled by refine_zero
};

/// Newton (multiplicity-aware) with Muller fallback when the derivative breaks
/// down. Stops when |dk| < tol. Throws NoConvergence.
RefineResult refine_root(const SampleFn& f, cplx k0, double tol, int multiplicity = 1,
                         int max_iter = 50, const BoxRegion* fence = nullptr);

struct ZeroFinderOptions {
  int samples0 = 16;
  double tol = 1e-10;
  double min_box = 1e-6;
  double newton_box = 1.0;      // largest winding-1 box seeded directly
  // A box this small around k = 0 where f vanishes exactly is reported as a
  // zero at the origin with the box's winding as multiplicity.
  double origin_box = 1e-2;
  double degenerate_floor = 1e-7;
  int degenerate_samples = 16;
  int max_dilations = 8;
  double dilation = 1.0 + 1.0 / 32.0;
  WindingOptions winding;
  SolverOptions solver;
  bool symmetry_completion = true;
};

/// Newton polish of a determinant zero plus the winding of its confirmation box.
RefineResult refine_zero(const RefractionProfile& profile, cplx k0, double tol,
                         const ZeroFinderOptions& options = {});

struct Zero {
  cplx k;
  int multiplicity = 1;
  double residual = 0.0;
  // Half-width of the box whose winding confirmed k. Normally 10 * tol; larger
  // when D sits under its noise floor that close to k. 0 for clusters.
  double confirm_radius = 0.0;
};

struct UnresolvedBox {
  BoxRegion box;
  int winding = 0;
};

struct ZeroSet {
  std::vector<Zero> zeros;  // sorted by (Re k, Im k)
  BoxRegion region;
  int total_winding = 0;
  std::string profile_id;
  // diagnostics
  long evaluations = 0;
  int dilations = 0;
  int completed_by_symmetry = 0;
  std::vector<UnresolvedBox> unresolved;

  int multiplicity_sum() const;
};

/// D sampled with its term scale, for the generic root machinery.
SampleFn determinant_sampler(const RefractionProfile& profile, const SolverOptions& options = {});

/// Zeros of an arbitrary analytic f in region (no symmetry completion).
ZeroSet find_zeros_of(const SampleFn& f, const BoxRegion& region,
                      const ZeroFinderOptions& options = {});

/// All zeros of D in region by recursive subdivision. Throws DegenerateProfile
/// when D vanishes identically (to the degenerate floor).
ZeroSet find_zeros(const RefractionProfile& profile, const BoxRegion& region,
                   const ZeroFinderOptions& options = {});

/// True when |D| / term scale is below the floor at every pseudo-random probe.
/// Fills lattice_spacing from the exponential type of D when it is unset. find_zeros and real_axis_zeros apply this themselves.
ZeroFinderOptions with_type_lattice(const RefractionProfile& profile, ZeroFinderOptions options = {});

bool is_degenerate(const RefractionProfile& profile, const BoxRegion& region,
                   const ZeroFinderOptions& options = {});

/// Closes a zero list under k -> conj(k) and k -> -k within region.
/// Returns how many images were added.
int complete_symmetry(std::vector<Zero>& zeros, const BoxRegion& region, double cluster_radius);

struct RealAxisResult {
  std::vector<double> roots;  // increasing
  BoxRegion strip;
  int strip_winding = 0;
  bool strip_mismatch = false;  // bisection count != strip winding
  bool degenerate = false;
};

/// Real zeros of D in (0, k_max] by sign-change bisection on a grid finer than
/// pi / (2 (1 + B)), polished by Newton and cross-checked against the winding
/// of a thin strip around the axis.
RealAxisResult real_axis_zeros(const RefractionProfile& profile, double k_max,
                               const ZeroFinderOptions& options = {});

}  // namespace ite
