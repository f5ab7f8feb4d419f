#include "fkt/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "fkt/error.hpp"

namespace fkt {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermitianEigen jacobi_eigen(const Matrix& input, double rel_tol, int max_sweeps) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::ShapeMismatch, "jacobi_eigen needs a square matrix");
  const Eigen::Index n = input.rows();
  Matrix a = 0.5 * (input + input.adjoint());
  Matrix v = Matrix::Identity(n, n);

  const double scale = a.norm();
  const double target = rel_tol * scale;
  int sweep = 0;
  if (n > 1 && scale > 0.0) {
    while (off_diagonal_norm(a) > target) {
      if (sweep == max_sweeps)
        throw Error(ErrorCode::NotConverged, "Jacobi iteration exceeded " + std::to_string(max_sweeps) + " sweeps");
      ++sweep;
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const std::complex<double> apq = a(p, q);
          const double mag = std::abs(apq);
          if (mag == 0.0) continue;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          // Skip rotations that cannot change the diagonal in floating point.
          if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
              std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            continue;
          }
          // Phase d = diag(1, conj(phase)) makes the 2x2 block real symmetric,
          // then a real rotation [[c, s], [-s, c]] diagonalizes it.
          const std::complex<double> phase = apq / mag;
          const double theta = (aqq - app) / (2.0 * mag);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          // Unitary g acting on columns p, q:
          //   g(:,p) = c e_p - s conj(phase) e_q,   g(:,q) = s e_p + c conj(phase) e_q
          const std::complex<double> gqp = -s * std::conj(phase);
          const std::complex<double> gqq = c * std::conj(phase);
          for (Eigen::Index k = 0; k < n; ++k) {
            const std::complex<double> akp = a(k, p);
            const std::complex<double> akq = a(k, q);
            a(k, p) = c * akp + gqp * akq;
            a(k, q) = s * akp + gqq * akq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const std::complex<double> apk = a(p, k);
            const std::complex<double> aqk = a(q, k);
            a(p, k) = c * apk + std::conj(gqp) * aqk;
            a(q, k) = s * apk + std::conj(gqq) * aqk;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
          for (Eigen::Index k = 0; k < n; ++k) {
            const std::complex<double> vkp = v(k, p);
            const std::complex<double> vkq = v(k, q);
            v(k, p) = c * vkp + gqp * vkq;
            v(k, q) = s * vkp + gqq * vkq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace fkt
