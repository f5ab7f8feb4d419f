#pragma once

// Theta and zeta functions of the Laplacians of a finite complex, the torsion
// element of the graded cohomology determinant line, its metric anomaly,
// relative torsion and correspondences.

#include <complex>

#include "fkt/det_line.hpp"
#include "fkt/hilbert_complex.hpp"

namespace fkt {

/// Nonzero spectrum of Box_q(u) together with the harmonic tau-dimension.
struct ThetaSeries {
  SpectralDensity spectrum;  // lambda > kernel threshold only
  double harmonic_dim = 0.0;
};

ThetaSeries theta_series(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                         const SpectralTolerances& tol = {});
/// Split a self-adjoint nonnegative operator's spectrum into kernel and the rest.
ThetaSeries theta_series(const CommutantOp& laplacian, const SpectralTolerances& tol = {});

/// theta(t) = sum_j jump_j exp(-t lambda_j).
double theta(const ThetaSeries& ts, double t);

/// zeta(s, lambda) = sum_j jump_j (lambda_j + lambda)^{-s}; entire in s.
std::complex<double> zeta(const ThetaSeries& ts, std::complex<double> s, double lambda = 0.0);

/// d/ds zeta(s, 0) at s = 0, i.e. -sum_j jump_j ln(lambda_j).
double zeta_prime0(const ThetaSeries& ts);

/// sum_q (-1)^q q zeta'_q(0).
double graded_zeta_prime0(const FiniteComplex& c, const MetricFamily& mf, double u,
                          const SpectralTolerances& tol = {});

/// Cohomology metric induced by u-harmonic forms, compared with u = 0 harmonics.
struct RhoPrime {
  GradedDetLine line;            // lines[q].coeff = Det_tau'(C_u)^{-1/2}
  double max_condition = 1.0;    // largest cond(C_u) over degrees and factors
  bool ill_conditioned = false;  // max_condition > 1e8
};

RhoPrime rho_prime(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol = {});

struct TorsionElement {
  GradedDetLine rho_prime;  // graded cohomology element
  double scalar = 1.0;      // exp(zeta^p'(0) / 2)
  double u = 0.0;
  double zeta_prime0 = 0.0;

  /// Coefficient against the graded base built from u = 0 harmonic metrics.
  double coefficient() const { return scalar * rho_prime.coefficient(); }
};

TorsionElement torsion(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol = {});

/// Graded trace sum_q (-1)^q Tr_tau(Z_q(u) P_q(u)) over the u-harmonic projectors.
double supertrace_z_harmonic(const FiniteComplex& c, const MetricFamily& mf, double u,
                             const SpectralTolerances& tol = {});

/// c(u) = 1/2 sum_q (-1)^q Tr_tau(Z_q(u)): the heat expansion of Tr(Z e^{-t Box})
/// terminates, so its t^0 coefficient is the full trace.
double anomaly_c(const FiniteComplex& c, const MetricFamily& mf, double u);

/// Central-difference checks of the metric variation identities at u.
///
///   torsion:    d/du log rho(u)         vs  rhs = -c(u)
///   zeta:       d/du zeta^p'(0)         vs  Str(Z P) - 2 c(u)
///   rho prime:  d/du log rho'(u)        vs  -Str(Z P) / 2
///
/// The first line is what the last two imply when added with weights 1/2 and 1.
struct VariationCheck {
  double lhs = 0.0;
  double anomaly = 0.0;  // c(u)
  double rhs = 0.0;      // -c(u)
  double gap = 0.0;
  double zeta_lhs = 0.0;
  double zeta_rhs = 0.0;
  double zeta_gap = 0.0;
  double rho_prime_lhs = 0.0;
  double rho_prime_rhs = 0.0;
  double rho_prime_gap = 0.0;
};

/// Throws StepTooLarge for h outside (0, 1e-2].
VariationCheck variation_check(const FiniteComplex& c, const MetricFamily& mf, double u, double h,
                               const SpectralTolerances& tol = {});

struct RelativeTorsion {
  TorsionElement e;
  TorsionElement f;
  double ratio = 1.0;  // rho_E / rho_F coefficients
};

RelativeTorsion relative_torsion(const FiniteComplex& ce, const FiniteComplex& cf, const MetricFamily& mfe,
                                 const MetricFamily& mff, double u, const SpectralTolerances& tol = {});

/// The linear map det H(E) -> det H(F) sending rho_E to rho_F, applied to x.
GradedDetLine correspondence_apply(const TorsionElement& rho_e, const TorsionElement& rho_f, const GradedDetLine& x);

}  // namespace fkt
