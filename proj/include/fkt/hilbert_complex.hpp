#pragma once

// Finite cochain complexes 0 -> C^0 -d0-> C^1 -> ... -> C^n -> 0 of Hilbertian
// modules, u-dependent metrics (w, w')_u = (A_q(u) w, w')_0, Laplacians and
// the Hodge decomposition.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fkt/vn_core.hpp"

namespace fkt {

struct FiniteComplex {
  Algebra algebra;
  std::vector<Module> degrees;            // C^0 .. C^n
  std::vector<CommutantOp> differentials; // d_q : C^q -> C^{q+1}, q = 0 .. n-1
  int p_label = 0;                        // carried, never interpreted

  FiniteComplex(Algebra alg, std::vector<Module> deg, std::vector<CommutantOp> diffs, int p = 0);

  int top_degree() const { return static_cast<int>(degrees.size()) - 1; }
  std::size_t num_degrees() const { return degrees.size(); }
  double euler_characteristic_tau() const;

  /// Degreewise direct sum of two complexes over one algebra.
  FiniteComplex direct_sum(const FiniteComplex& other) const;
};

struct ComplexReport {
  bool valid = true;
  std::vector<double> d_squared;  // ||d_{q+1} d_q|| per q
  double max_violation = 0.0;
  std::vector<std::string> problems;
};

ComplexReport validate_complex(const FiniteComplex& c, double rel_tol = 1e-10);

/// u -> A_q(u), positive invertible with A_q(0) = 1, plus Z_q(u) = A_q(u)^{-1} dA_q/du.
class MetricFamily {
 public:
  using OpFn = std::function<CommutantOp(int q, double u)>;

  /// A_q(u) = exp(u B_q), B_q self-adjoint. Z_q(u) = B_q.
  static MetricFamily exponential(std::vector<CommutantOp> generators);
  /// A_q(u) = exp(rate * u) on every degree.
  static MetricFamily conformal(const FiniteComplex& c, double rate);
  static MetricFamily constant(const FiniteComplex& c);
  /// Arbitrary smooth family; `derivative` may be empty, in which case z() throws MissingDerivative.
  static MetricFamily sampled(std::size_t num_degrees, OpFn metric, OpFn derivative = {});

  std::size_t num_degrees() const;
  CommutantOp metric(int q, double u) const;
  CommutantOp metric_sqrt(int q, double u) const;
  CommutantOp metric_inv_sqrt(int q, double u) const;
  CommutantOp z(int q, double u) const;

  /// Generators B_q for exponential families, empty otherwise.
  const std::vector<CommutantOp>& generators() const;
  bool is_exponential() const;

 private:
  struct Impl;
  explicit MetricFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Box_q(u) = d_q^{*u} d_q + d_{q-1} d_{q-1}^{*u} with X^{*u} = A_dom^{-1} X^* A_cod.
CommutantOp laplacian(const FiniteComplex& c, const MetricFamily& mf, int q, double u);

/// A_q^{1/2} Box_q(u) A_q^{-1/2}: the Laplacian in u-orthonormal coordinates, base self-adjoint.
CommutantOp hermitian_laplacian(const FiniteComplex& c, const MetricFamily& mf, int q, double u);

struct HodgeProjectors {
  CommutantOp harmonic;
  CommutantOp exact;
  CommutantOp coexact;
};

/// u-orthogonal projectors of the Hodge decomposition C^q = H_u + im d_{q-1} + im d_q^{*u}.
HodgeProjectors hodge_projectors(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                                 const SpectralTolerances& tol = {});

/// Orthonormal (in the base metric of u-orthonormal coordinates) basis of ker Box_q(u), per factor.
std::vector<Matrix> harmonic_basis_orthonormal(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                                               const SpectralTolerances& tol = {});

double betti(const FiniteComplex& c, const MetricFamily& mf, int q, double u, const SpectralTolerances& tol = {});

}  // namespace fkt
