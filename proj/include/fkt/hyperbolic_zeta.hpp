#pragma once

// Spectral zeta data of compact hyperbolic surfaces of genus g, via Randol's
// continuation of the zeta function of the Laplacian on functions:
//
//   zeta_0(s)  = (g-1) pi/(s-1) int_0^inf (1/4 + r^2)^{1-s} sech^2(pi r) dr,   Re s < 1
//   zeta_0'(0) = (g-1) pi int_0^inf (1/4 + r^2) sech^2(pi r) (log(1/4 + r^2) - 1) dr
//
// and the torsion constant C = zeta_0'(0)|_{g=2} / 2, which enters the
// surface torsion as rho^0 = e^{C(g-1)} rho'^0 and rho^1 = e^{-C(g-1)} rho'^1.

#include "fkt/quadrature.hpp"

namespace fkt {

struct QuadratureSpec {
  double r_max = 10.0;
  double abs_tol = 1e-10;
  int max_refinements = 20;
};

/// Integrals are split into unit panels [k, k+1] summed from the origin
/// outwards; the neglected tail [r_max, inf) is bounded analytically and
/// added to `est_error`.
QuadratureResult randol_zeta(double s, int genus, const QuadratureSpec& spec = {});
QuadratureResult randol_zeta_prime0(int genus, const QuadratureSpec& spec = {});
QuadratureResult torsion_constant_C(const QuadratureSpec& spec = {});

/// exp((-1)^p C (g-1)) for p in {0, 1}.
double surface_torsion_scalar(int genus, int p, const QuadratureSpec& spec = {});

/// exp(C_p * volume): torsion of a locally symmetric quotient scales with its volume.
double symmetric_space_scaling(double c_p, double vol_or_chi);

/// Upper bound for int_R^inf |(1/4 + r^2)(log(1/4 + r^2) - 1)| sech^2(pi r) dr.
double zeta_prime_tail_bound(double r_max);

/// Upper bound for int_R^inf (1/4 + r^2)^a sech^2(pi r) dr, a = 1 - s > 0.
/// Returns +inf when the bound is not valid at this R.
double zeta_tail_bound(double s, double r_max);

}  // namespace fkt
