#pragma once

// Seeded random instances for tests and the `generate` command. The seed comes
// from FKT_SEED when set.

#include <cstdint>
#include <random>

#include "fkt/hilbert_complex.hpp"

namespace fkt {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Seed from the FKT_SEED environment variable, else `fallback`.
  static Rng from_env(std::uint64_t fallback = 1729);

  double uniform(double a, double b);
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  double normal();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

Algebra random_algebra(Rng& rng, int max_factors = 3, int max_size = 3);
Module random_module(Rng& rng, const Algebra& a, int min_mult = 1, int max_mult = 4);

/// Standard complex Gaussian entries.
Matrix random_matrix(Rng& rng, int rows, int cols);
/// Haar-like unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Rng& rng, int n);

CommutantOp random_op(Rng& rng, const Module& domain, const Module& codomain);
/// Self-adjoint with entries of size about `scale`.
CommutantOp random_hermitian(Rng& rng, const Module& m, double scale = 1.0);
/// U diag(e^{s_j}) U* with s_j uniform in [-spread, spread].
CommutantOp random_positive(Rng& rng, const Module& m, double spread = 1.0);
/// U diag(e^{s_j}) V*, invertible and not normal in general.
CommutantOp random_invertible(Rng& rng, const Module& m, double spread = 0.5);

struct ComplexShape {
  int num_degrees = 3;
  int max_block = 6;
  int max_piece = 2;  // largest harmonic or exact rank per factor and degree
};

/// Complex built from a split decomposition C^q = H^q + X^q + Y^q with d_q an
/// isomorphism Y^q -> X^{q+1}, then conjugated by well-conditioned invertibles.
FiniteComplex random_complex(Rng& rng, const Algebra& a, const ComplexShape& shape = {});

/// A_q(u) = exp(u B_q) with random self-adjoint B_q; `traceless` makes every
/// Tr_tau(B_q) vanish.
MetricFamily random_exp_family(Rng& rng, const FiniteComplex& c, double scale = 0.5, bool traceless = false);

}  // namespace fkt
