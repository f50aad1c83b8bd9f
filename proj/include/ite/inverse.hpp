#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ite/cartwright.hpp"
#include "ite/profile.hpp"
#include "ite/radial_solver.hpp"
#include "ite/zero_finder.hpp"

namespace ite {

/// Eigenvalues inside a wedge up to a radius, sorted by modulus.
struct Spectrum {
  std::vector<cplx> eigenvalues;
  Wedge wedge;
  double r_max = 0.0;

  /// Sorts by (|k|, Re k, Im k). Throws DomainError if an eigenvalue lies
  /// outside the wedge or beyond r_max.
  static Spectrum make(std::vector<cplx> eigenvalues, const Wedge& wedge, double r_max);
  /// Zeros of zs in the wedge with 0 < |k| <= r_max, repeated by multiplicity.
  /// Throws RegionTooSmall if the search region does not cover that sector.
  static Spectrum from_zero_set(const ZeroSet& zs, const Wedge& wedge, double r_max);
};

struct BRecovery {
  double b_hat = 0.0;
  double fit_error = 0.0;  // pi times the slope uncertainty
  DensityEstimate density;
};

/// B_hat = pi * delta_hat - 1 from the wedge density of the spectrum.
/// Throws InsufficientData with fewer than 20 eigenvalues in the window.
BRecovery recover_B(const Spectrum& spectrum, std::pair<double, double> window);

struct UniquenessVerdict {
  enum class Conclusion { ConsistentWithEqual, Distinguished, Inconclusive };

  bool same_b = false;
  std::optional<double> b1_hat, b2_hat;
  double b_tolerance = 0.0;  // combined fit error
  int matched_pairs = 0;
  double max_pair_distance = 0.0;
  int unmatched = 0;          // eigenvalues without a partner within pair_tol
  int far_unmatched = 0;      // ... and none within 10 pair_tol
  Conclusion conclusion = Conclusion::Inconclusive;
  std::string witness;
};

std::string to_string(UniquenessVerdict::Conclusion c);

/// Default relative pairing tolerance: pairs match when |k1 - k2| <= pair_tol (1 + |k1|).
inline constexpr double kDefaultPairTol = 1e-6;

/// Greedy nearest-neighbour matching plus B_hat comparison. The density window
/// defaults to [r/4, r] with r the smaller of the two radii.
UniquenessVerdict compare_spectra(const Spectrum& s1, const Spectrum& s2,
                                  double pair_tol = kDefaultPairTol,
                                  std::optional<std::pair<double, double>> window = std::nullopt);

struct FValue {
  cplx k;
  ScaledComplex f;   // y1(1; k) - y2(1; k)
  double log_scale;  // ln max(|y1(1;k)|, |y2(1;k)|)
  double relative() const;
};

/// F(k) = y(1; k) for p1 minus y(1; k) for p2, with the local scale.
std::vector<FValue> crosscheck_F(const RefractionProfile& p1, const RefractionProfile& p2,
                                 const std::vector<cplx>& k_list,
                                 const SolverOptions& options = {});

enum class BoundaryMode { Dirichlet, DirichletNeumann };

std::string to_string(BoundaryMode mode);

/// Real k in (0, k_max] with z(B; k) = 0 (Dirichlet) or z'(B; k) = 0
/// (DirichletNeumann) for z'' + (k^2 - p) z = 0, z(0) = 0. Sign changes on a
/// grid of step pi / (4 B) are polished to 1e-10 relative.
std::vector<double> sl_eigenvalues(const PotentialFn& p, double b, BoundaryMode mode,
                                   double k_max, const SolverOptions& options = {});

/// True when the merged sequence alternates between a and b with no ties.
bool strictly_interlace(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ite
