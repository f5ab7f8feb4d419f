#pragma once

// Finite von Neumann algebras modelled as weighted direct sums of matrix
// factors, their finitely generated Hilbertian modules, the commutant
// (block operators), the canonical trace and the Fuglede-Kadison determinant.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fkt/jacobi.hpp"

namespace fkt {

using Complex = std::complex<double>;

struct Factor {
  int size = 1;         // n_i, the factor is M_{n_i}(C)
  double weight = 1.0;  // w_i, tau restricted to the factor is w_i * Tr
  bool operator==(const Factor&) const = default;
};

/// A = (+)_i M_{n_i}(C) with trace tau = sum_i w_i Tr_i, normalized so tau(1) = 1.
class Algebra {
 public:
  static Algebra make(std::vector<Factor> factors, bool auto_normalize = false);

  std::span<const Factor> factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  double weight(std::size_t i) const { return factors_[i].weight; }

  bool operator==(const Algebra&) const = default;

 private:
  explicit Algebra(std::vector<Factor> f) : factors_(std::move(f)) {}
  std::vector<Factor> factors_;
};

/// Finitely generated Hilbertian module: k_i copies of the standard
/// representation of each factor. Its commutant on factor i is M_{k_i}(C).
class Module {
 public:
  Module(Algebra algebra, std::vector<int> mults);
  static Module zero(const Algebra& algebra);
  /// l^2(A): the module with k_i = n_i, of tau-dimension one.
  static Module regular(const Algebra& algebra);

  const Algebra& algebra() const { return algebra_; }
  std::span<const int> mults() const { return mults_; }
  int mult(std::size_t i) const { return mults_[i]; }
  bool is_zero() const;
  double dim_tau() const;

  Module direct_sum(const Module& other) const;

  bool operator==(const Module&) const = default;

 private:
  Algebra algebra_;
  std::vector<int> mults_;
};

/// Morphism of Hilbertian modules, stored as one k'_i x k_i block per factor.
class CommutantOp {
 public:
  CommutantOp(Module domain, Module codomain, std::vector<Matrix> blocks);

  static CommutantOp identity(const Module& m);
  static CommutantOp zero(const Module& domain, const Module& codomain);
  static CommutantOp scalar(const Module& m, Complex value);
  /// Endomorphism with the given diagonal in every factor block (one list per factor).
  static CommutantOp diagonal(const Module& m, const std::vector<std::vector<double>>& diag);

  const Module& domain() const { return domain_; }
  const Module& codomain() const { return codomain_; }
  std::span<const Matrix> blocks() const { return blocks_; }
  const Matrix& block(std::size_t i) const { return blocks_[i]; }
  std::size_t num_blocks() const { return blocks_.size(); }

  bool is_endomorphism() const { return domain_ == codomain_; }
  bool is_self_adjoint(double tol = 1e-12) const;
  /// Max over blocks of the Frobenius norm.
  double norm() const;

  CommutantOp adjoint() const;
  /// Inverse of an isomorphism; throws NotInvertible.
  CommutantOp inverse() const;

  CommutantOp operator+(const CommutantOp& rhs) const;
  CommutantOp operator-(const CommutantOp& rhs) const;
  /// Composition: (a * b)(x) = a(b(x)).
  CommutantOp operator*(const CommutantOp& rhs) const;
  CommutantOp operator*(Complex s) const;

  /// Direct sum of operators on the direct sum of modules.
  CommutantOp direct_sum(const CommutantOp& other) const;

 private:
  Module domain_;
  Module codomain_;
  std::vector<Matrix> blocks_;
};

struct SpectralStep {
  double lambda = 0.0;
  double jump = 0.0;
};

/// Right-continuous step function phi(lambda) = Tr_tau(E_lambda), stored by its jumps.
struct SpectralDensity {
  std::vector<SpectralStep> steps;  // strictly increasing lambda
  double total() const;
};

struct SpectralTolerances {
  double kernel_rel = 1e-10;  // lambda < kernel_rel * max(lambda_max, 1) counts as zero
  double merge_rel = 1e-9;    // eigenvalues closer than merge_rel * max|lambda| merge
  double self_adjoint = 1e-12;
  double negative = 1e-10;    // accepted negative part before NotPositive
};

Complex canonical_trace(const CommutantOp& t);

double tau_dimension(const Module& m);
/// Tr_tau of a self-adjoint idempotent; throws NotAProjection.
double tau_dimension(const CommutantOp& projection, double tol = 1e-10);

SpectralDensity spectral_density(const CommutantOp& a, const SpectralTolerances& tol = {});

/// Apply a real function to a self-adjoint operator through its eigendecomposition.
CommutantOp spectral_function(const CommutantOp& a, const std::function<double(double)>& f,
                              double self_adjoint_tol = 1e-10);

/// Eigenvalue threshold below which a spectrum entry counts as kernel.
double kernel_threshold(double lambda_max, const SpectralTolerances& tol = {});

struct FkDeterminant {
  double value = 1.0;
  double log_value = 0.0;
  bool d_class = true;     // the log-density integral is a finite sum here
  double kernel_dim = 0.0; // tau-dimension excluded as kernel
};

/// Det_tau(A) = exp(int ln(lambda) dphi) over the nonzero spectrum of A >= 0.
FkDeterminant fk_determinant(const CommutantOp& a, const SpectralTolerances& tol = {});

/// Det_tau(|T|) = Det_tau(T* T)^{1/2} for an invertible morphism (not necessarily positive).
double fk_determinant_abs(const CommutantOp& t, const SpectralTolerances& tol = {});

struct PathDeterminant {
  double value = 1.0;
  double log_value = 0.0;
  double error_estimate = 0.0;
};

/// log Det_tau(A_1) = int_0^1 Re Tr_tau(A_t^{-1} A_t') dt from uniform samples
/// t_j = j / N, j = 0..N, N a multiple of 4 and at least 8. Derivatives are
/// fourth-order differences (five-point, one-sided at the ends), the integral
/// is composite Simpson on h and 2h combined as (16 S_h - S_2h) / 15.
PathDeterminant fk_determinant_path(std::span<const CommutantOp> samples);

/// Convenience overload that samples `path` at `intervals + 1` uniform points.
PathDeterminant fk_determinant_path(const std::function<CommutantOp(double)>& path, int intervals = 512);

}  // namespace fkt
