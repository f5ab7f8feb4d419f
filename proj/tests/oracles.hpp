#pragma once

// Independent reference computations built directly on Eigen's dense solvers.

#include <cmath>

#include <Eigen/Dense>

#include "fkt/vn_core.hpp"

namespace oracle {

/// prod_i |det A_i|^{w_i}, via LU.
inline double fk_det(const fkt::CommutantOp& a) {
  double log = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i).rows() == 0) continue;
    log += a.domain().algebra().weight(i) * std::log(std::abs(a.block(i).fullPivLu().determinant()));
  }
  return std::exp(log);
}

/// Eigenvalues of a Hermitian block, ascending.
inline Eigen::VectorXd eigenvalues(const fkt::Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<fkt::Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

/// sum_i w_i * rank(A_i).
inline double tau_rank(const fkt::CommutantOp& a, double tol = 1e-9) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i).size() == 0) continue;
    Eigen::FullPivLU<fkt::Matrix> lu(a.block(i));
    lu.setThreshold(tol);
    r += a.domain().algebra().weight(i) * static_cast<double>(lu.rank());
  }
  return r;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
