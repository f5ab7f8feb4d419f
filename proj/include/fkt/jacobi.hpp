#pragma once

#include <Eigen/Dense>

namespace fkt {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

struct HermitianEigen {
  Vector values;    // ascending
  Matrix vectors;   // unitary, columns match `values`
  int sweeps = 0;
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Pairs are visited in row-major order (p < q) every sweep, so the result is
/// reproducible bit for bit. Iteration stops once the off-diagonal Frobenius
/// norm drops below `rel_tol * ||A||_F`. Only the Hermitian part of `a` is
/// used; callers are expected to have checked self-adjointness.
HermitianEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-13, int max_sweeps = 100);

}  // namespace fkt
