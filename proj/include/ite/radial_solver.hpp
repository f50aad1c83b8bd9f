#pragma once

#include <optional>
#include <utility>

#include "ite/profile.hpp"
#include "ite/scaled_complex.hpp"

namespace ite {

struct SolverOptions {
  double rtol = 1e-11;
  double atol = 1e-14;  // on renormalized mantissas
  double k_max = 1e4;
  long max_steps = 5'000'000;
};

/// Boundary data of the l = 1 radial solution at r = 1.
struct RadialSolution {
  cplx k;
  ScaledComplex y1;   // y(1; k)
  ScaledComplex dy1;  // y'(1; k)
  std::optional<ScaledComplex> dk_y1;
  std::optional<ScaledComplex> dk_dy1;
  long steps = 0;
  // k == 0: y vanishes identically and only the k-derivative (the regular
  // solution r^2/3 of y'' - 2y/r^2 = 0) carries information.
  bool limit_branch = false;
};

struct SeriesValue {
  cplx y, dy;        // y(r0), y'(r0)
  cplx dk_y, dk_dy;  // their k-derivatives
  int terms = 0;
};

/// Launch radius min(1e-3, 0.1 / (1 + |k|)) used to step over the 2/r^2 singularity.
double launch_radius(cplx k);

/// Frobenius series of the regular solution with y(r)/r -> j1(kr) as r -> 0.
SeriesValue series_init(const RefractionProfile& profile, cplx k, double r0);

/// Integrates y'' + (k^2 n(r) - 2/r^2) y = 0 from the series launch to r = 1.
/// Throws DomainError for |k| > k_max and StepUnderflow if the controller stalls.
RadialSolution solve_y(const RefractionProfile& profile, cplx k, bool want_dk = false,
                       const SolverOptions& options = {});

struct ZSolution {
  ScaledComplex z;   // z(B; k)
  ScaledComplex dz;  // z'(B; k)
  long steps = 0;
};

/// Schrodinger-side solution z'' + (k^2 - p(xi)) z = 0 on (0, B], z(0) = 0,
/// normalized so that z(xi) ~ scale * xi * j1(k xi) as xi -> 0.
ZSolution solve_z(const PotentialFn& p, double b, cplx k, cplx scale = 1.0,
                  const SolverOptions& options = {});

/// The scale for which solve_z(p_profile, B, k, scale).z == n(1)^{1/4} y(1; k).
double liouville_scale(const RefractionProfile& profile);

/// Two-term large-|k| reference for z and z_xi in the xi^2-normalized class:
/// 3 sin(k xi)/(k^3 xi) - 3 cos(k xi)/k^2 and its xi-derivative.
std::pair<ScaledComplex, ScaledComplex> asymptotic_z(cplx k, double xi);

}  // namespace ite
