#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ite/profile.hpp"
#include "ite/zero_finder.hpp"

namespace ite {

/// Angular sector {arg k in [theta_min, theta_max]}.
///
/// theta_max may exceed pi (up to theta_min + 2 pi) so that sectors straddling
/// the negative real axis, such as [pi - eps, pi + eps], are expressible.
struct Wedge {
  enum class Label { Sigma1, Sigma2, OffAxisUpper, OffAxisLower, Custom };

  double theta_min = 0.0;
  double theta_max = 0.0;
  Label label = Label::Custom;

  /// Throws DomainError unless -pi < theta_min < theta_max <= theta_min + 2 pi
  /// and theta_min <= pi.
  static Wedge make(double theta_min, double theta_max, Label label = Label::Custom);
  static Wedge sigma1(double eps = 0.1);         // [-eps, eps]
  static Wedge sigma2(double eps = 0.1);         // [pi - eps, pi + eps]
  static Wedge off_axis_upper(double eps = 0.1); // [eps, pi - eps]
  static Wedge off_axis_lower(double eps = 0.1); // [-pi + eps, -eps]

  bool contains(cplx k) const;
  /// Box enclosing the annular sector inner <= |k| <= r.
  BoxRegion sector_bounds(double inner, double r) const;
};

std::string to_string(Wedge::Label label);
Wedge::Label wedge_label_from_string(const std::string& s);

/// Zeros of modulus below this radius are not required to be covered by the
/// search region (k = 0 is always excluded from counts).
inline constexpr double kDefaultInnerRadius = 1.0;

/// Multiplicity-weighted count of zeros with 0 < |k| <= r and arg k in wedge.
/// Throws RegionTooSmall unless the region of zs covers the sector
/// inner_radius <= |k| <= r.
int counting_function(const ZeroSet& zs, const Wedge& wedge, double r,
                      double inner_radius = kDefaultInnerRadius);

struct DensityEstimate {
  double delta_hat = 0.0;
  std::pair<double, double> fit_window;
  double intercept = 0.0;
  double residual = 0.0;      // rms of the linear fit
  double max_deviation = 0.0; // max |N(r) - delta_hat r - intercept| on the window
  double fit_error = 0.0;     // slope uncertainty proxy 2 max_deviation / window length
  int zeros_in_window = 0;
  std::vector<std::pair<double, int>> counts;  // (r, N(r)), increasing r
};

/// Least-squares slope of N(r) against r on a uniform grid over the window.
/// Throws InsufficientData with fewer than 10 zeros in the window.
DensityEstimate wedge_density(const ZeroSet& zs, const Wedge& wedge,
                              std::pair<double, double> window, int grid_points = 2001);

/// Same fit on the counting function of an explicit list of zeros (no region check).
DensityEstimate density_from_points(const std::vector<cplx>& points, const Wedge& wedge,
                                    std::pair<double, double> window, int grid_points = 2001);

struct IndicatorEstimate {
  double theta = 0.0;
  double h_hat = 0.0;
  double intercept = 0.0;
  double fit_error = 0.0;
  std::vector<std::pair<double, double>> samples;  // (r, ln|D(r e^{i theta})| / r)
};

/// Angle from the real axis inside which the indicator is not estimated.
inline constexpr double kIndicatorGuard = 0.05;

/// ln|D(r e^{i theta})| / r at each r; h_hat is the least-squares slope of
/// ln|D| against r over the upper half of the samples (a limsup proxy).
/// Throws DomainError inside the guard band around 0 and pi or for
/// non-increasing r_samples.
IndicatorEstimate indicator_estimate(const RefractionProfile& profile, double theta,
                                     const std::vector<double>& r_samples,
                                     const SolverOptions& options = {});

/// Default radial samples for indicator fits: uniform over [r_max/4, r_max].
std::vector<double> default_indicator_radii(double r_max = 200.0, int count = 32);

struct IndicatorWidth {
  double width = 0.0;
  double h_upper = 0.0;
  double h_lower = 0.0;
  double predicted = 0.0;  // 2 (1 + B)
  double b = 0.0;
};

/// h_hat(pi/2) + h_hat(-pi/2). Throws DegenerateProfile when D vanishes to the
/// degenerate floor.
IndicatorWidth indicator_width(const RefractionProfile& profile,
                               const std::vector<double>& r_samples = default_indicator_radii(),
                               const ZeroFinderOptions& options = {});

/// Multiplicity-weighted sum of 1/k over zeros with 0 < |k| < r. Throws
/// RegionTooSmall unless the region covers the disc |k| <= r (real extent) and
/// contains both k and -k images.
cplx reciprocal_sum(const ZeroSet& zs, double r);

}  // namespace ite
