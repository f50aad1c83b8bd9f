#pragma once

#include <optional>

#include "ite/profile.hpp"
#include "ite/radial_solver.hpp"
#include "ite/scaled_complex.hpp"

namespace ite {

/// j1(t), j1'(t), j1''(t).
struct BesselJ1 {
  ScaledComplex j1;
  ScaledComplex dj1;
  ScaledComplex d2j1;
};

/// Spherical Bessel j1 with derivatives: Maclaurin series for |t| < 0.5,
/// closed form sin t/t^2 - cos t/t otherwise.
BesselJ1 bessel_j1(cplx t);

struct DeterminantValue {
  cplx k;
  ScaledComplex value;
  double logabs = 0.0;  // ln|D|, -inf for an exact zero
  // ln of the largest of the three assembled terms; the natural yardstick
  // for |D| under exponential growth.
  double log_term_scale = 0.0;
  std::optional<ScaledComplex> derivative;  // dD/dk
  bool limit_branch = false;

  /// |D| / term scale (0 when D vanishes exactly).
  double relative_magnitude() const;
};

/// D(k) = -k y(1) j1'(k) + y'(1) j1(k) - y(1) j1(k).
DeterminantValue eval_D(const RefractionProfile& profile, cplx k, bool want_dk = false,
                        const SolverOptions& options = {});

/// k^4 D(k) / 3. DomainError at k = 0.
DeterminantValue eval_scriptD(const RefractionProfile& profile, cplx k,
                              const SolverOptions& options = {});

/// Leading-order product form cos(Bk) cos(k) {[k + (k^2-1) tan k] + tan(Bk) [k tan k - k^2]},
/// expanded without tangents so it stays finite on the real axis.
ScaledComplex factored_leading_form(cplx k, double b);

struct NullPair {
  cplx a;
  cplx b;
  double residual = 0.0;
};

/// Relative |D| below which k is accepted as an eigenvalue by null_pair.
inline constexpr double kEigenvalueThreshold = 1e-6;

/// Unit-norm (a, b) spanning the kernel of the matching system at k_star,
/// gauge-fixed so that a is real and non-negative.
/// Throws NotAnEigenvalue when |D(k_star)| exceeds the relative threshold.
NullPair null_pair(const RefractionProfile& profile, cplx k_star,
                   const SolverOptions& options = {});

}  // namespace ite
