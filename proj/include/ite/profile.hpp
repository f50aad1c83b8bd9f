#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ite {

/// n(r), n'(r), n''(r) at one radius.
struct IndexValue {
  double n = 1.0;
  double dn = 0.0;
  double d2n = 0.0;
};

/// Radially stratified refraction index on the unit ball; n(r) = 1 for r >= 1.
///
/// Every supported kind is a polynomial in r on [0, 1], so derivatives are
/// exact and the Taylor coefficients at r = 0 are available to the series
/// launch of the radial solver.
class RefractionProfile {
 public:
  enum class Kind { Constant, Polynomial, SmoothBump };

  static RefractionProfile constant(double value);
  static RefractionProfile polynomial(std::vector<double> coeffs);
  /// n(r) = 1 + c (1 - r^2)^3, which is C^2 across r = 1.
  static RefractionProfile smooth_bump(double c);

  Kind kind() const noexcept { return kind_; }
  /// The defining parameter: value for Constant, c for SmoothBump.
  double parameter() const noexcept { return parameter_; }
  /// Coefficients in ascending powers of r, valid on [0, 1].
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  /// (n, n', n'') at r >= 0. Throws DomainError for r < 0.
  IndexValue evaluate(double r) const;
  /// Same as evaluate but without the r >= 1 branch: the polynomial itself.
  IndexValue evaluate_inner(double r) const;

  /// max n on [0, 1] (grid estimate), at least 1.
  double max_value() const noexcept { return max_n_; }

  /// Canonical text form; identical profiles give identical strings.
  std::string canonical() const;
  /// 16 hex digit FNV-1a hash of canonical().
  std::string content_hash() const;

 private:
  RefractionProfile(Kind kind, double parameter, std::vector<double> coeffs);

  Kind kind_;
  double parameter_;
  std::vector<double> coeffs_;
  double max_n_ = 1.0;
};

struct ValidationReport {
  bool valid = false;
  bool positive = false;
  double min_n = 0.0;
  double min_n_at = 0.0;
  // |n(1-) - 1|, |n'(1-)|, |n''(1-)|
  double jump_n = 0.0;
  double jump_dn = 0.0;
  double jump_d2n = 0.0;
  bool smoothness_warning = false;
};

/// Positivity on a dense grid plus C^2-matching flags at r = 1.
/// Throws InvalidProfile when n <= 0 somewhere on [0, 1].
ValidationReport validate(const RefractionProfile& profile);

/// Liouville variable xi(r) = int_0^r sqrt(n) and its inverse.
class LiouvilleMap {
 public:
  LiouvilleMap(RefractionProfile profile, std::vector<double> r_nodes,
               std::vector<double> xi_nodes, double quad_error);

  /// Optical radius B = xi(1).
  double optical_radius() const noexcept { return xi_nodes_.back(); }
  double quadrature_error() const noexcept { return quad_error_; }
  const std::vector<double>& r_nodes() const noexcept { return r_nodes_; }
  const std::vector<double>& xi_nodes() const noexcept { return xi_nodes_; }

  double xi_of_r(double r) const;
  /// Monotone interpolation followed by Newton polish. DomainError outside [0, B].
  double r_of_xi(double xi) const;

 private:
  RefractionProfile profile_;
  std::vector<double> r_nodes_;
  std::vector<double> xi_nodes_;
  double quad_error_;
  std::function<double(double)> inverse_;
};

/// Adaptive Gauss-Kronrod quadrature of sqrt(n); throws QuadratureFailure when
/// the node budget is exhausted.
LiouvilleMap compute_liouville(const RefractionProfile& profile,
                               double quad_tol = 1e-13);

struct Potential {
  double p = 0.0;  // full Schrodinger potential including 2/xi^2
  double q = 0.0;  // p - 2/xi^2
};

/// p(xi) and q(xi). DomainError if xi <= 0 or xi > B.
Potential potential(const RefractionProfile& profile, const LiouvilleMap& map,
                    double xi);

using PotentialFn = std::function<double(double)>;

/// xi -> p(xi) bound to a profile and its map (both copied).
PotentialFn make_potential(const RefractionProfile& profile,
                           const LiouvilleMap& map);

/// Potential of the free problem, p = 2/xi^2 (q = 0).
PotentialFn free_potential();

struct PotentialNorms {
  double sup = 0.0;
  double l1 = 0.0;
};

/// sup and L1 norms of q over (0, B], sampled on a midpoint grid.
PotentialNorms q_norms(const RefractionProfile& profile, const LiouvilleMap& map,
                       int samples = 2000);

}  // namespace ite
