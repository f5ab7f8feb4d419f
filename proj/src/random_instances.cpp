#include "fkt/random_instances.hpp"

#include <cstdlib>
#include <string>

#include <Eigen/QR>

#include "fkt/error.hpp"

namespace fkt {

Rng Rng::from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("FKT_SEED"); s != nullptr && *s != '\0') {
    try {
      return Rng(std::stoull(s));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("FKT_SEED is not an unsigned integer: ") + s);
    }
  }
  return Rng(fallback);
}

double Rng::uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }

int Rng::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Algebra random_algebra(Rng& rng, int max_factors, int max_size) {
  const int n = rng.integer(1, max_factors);
  std::vector<Factor> f;
  for (int i = 0; i < n; ++i) f.push_back({rng.integer(1, max_size), rng.uniform(0.2, 1.0)});
  return Algebra::make(std::move(f), true);
}

Module random_module(Rng& rng, const Algebra& a, int min_mult, int max_mult) {
  std::vector<int> k;
  for (std::size_t i = 0; i < a.num_factors(); ++i) k.push_back(rng.integer(min_mult, max_mult));
  return Module(a, std::move(k));
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return m;
}

Matrix random_unitary(Rng& rng, int n) {
  if (n == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

namespace {

template <class BlockFn>
CommutantOp per_factor(const Module& m, BlockFn fn) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < m.mults().size(); ++i) blocks.push_back(fn(m.mult(i)));
  return CommutantOp(m, m, std::move(blocks));
}

Eigen::VectorXcd log_uniform_diag(Rng& rng, int n, double spread) {
  Eigen::VectorXcd d(n);
  for (int j = 0; j < n; ++j) d(j) = std::exp(rng.uniform(-spread, spread));
  return d;
}

}  // namespace

CommutantOp random_op(Rng& rng, const Module& domain, const Module& codomain) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < domain.mults().size(); ++i)
    blocks.push_back(random_matrix(rng, codomain.mult(i), domain.mult(i)));
  return CommutantOp(domain, codomain, std::move(blocks));
}

CommutantOp random_hermitian(Rng& rng, const Module& m, double scale) {
  return per_factor(m, [&](int n) -> Matrix {
    const Matrix g = random_matrix(rng, n, n);
    return (g + g.adjoint()) * (0.5 * scale);
  });
}

CommutantOp random_positive(Rng& rng, const Module& m, double spread) {
  return per_factor(m, [&](int n) -> Matrix {
    const Matrix u = random_unitary(rng, n);
    return u * log_uniform_diag(rng, n, spread).asDiagonal() * u.adjoint();
  });
}

CommutantOp random_invertible(Rng& rng, const Module& m, double spread) {
  return per_factor(m, [&](int n) -> Matrix {
    const Matrix u = random_unitary(rng, n);
    const Matrix v = random_unitary(rng, n);
    return u * log_uniform_diag(rng, n, spread).asDiagonal() * v.adjoint();
  });
}

FiniteComplex random_complex(Rng& rng, const Algebra& a, const ComplexShape& shape) {
  if (shape.num_degrees < 1) throw Error(ErrorCode::InvalidArgument, "a complex needs at least one degree");
  const auto nd = static_cast<std::size_t>(shape.num_degrees);
  const std::size_t nf = a.num_factors();
  // Per factor and degree: harmonic, exact (image of d_{q-1}) and coexact ranks.
  std::vector<std::vector<int>> h(nf, std::vector<int>(nd)), x(nf, std::vector<int>(nd)), y(nf, std::vector<int>(nd));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t q = 0; q < nd; ++q) {
      x[i][q] = q == 0 ? 0 : y[i][q - 1];
      const int budget = shape.max_block - x[i][q];
      y[i][q] = q + 1 == nd ? 0 : rng.integer(0, std::min(shape.max_piece, budget));
      h[i][q] = rng.integer(0, std::min(shape.max_piece, budget - y[i][q]));
    }
  std::vector<Module> modules;
  for (std::size_t q = 0; q < nd; ++q) {
    std::vector<int> k(nf);
    for (std::size_t i = 0; i < nf; ++i) k[i] = h[i][q] + x[i][q] + y[i][q];
    modules.emplace_back(a, std::move(k));
  }
  std::vector<CommutantOp> g;
  for (const auto& m : modules) g.push_back(random_invertible(rng, m));
  std::vector<CommutantOp> diffs;
  for (std::size_t q = 0; q + 1 < nd; ++q) {
    std::vector<Matrix> blocks;
    for (std::size_t i = 0; i < nf; ++i) {
      // split order in each degree: [H | X | Y]
      Matrix d = Matrix::Zero(modules[q + 1].mult(i), modules[q].mult(i));
      const int r = y[i][q];
      if (r > 0) {
        const Matrix u = random_unitary(rng, r);
        const Matrix v = random_unitary(rng, r);
        d.block(h[i][q + 1], h[i][q] + x[i][q], r, r) = u * log_uniform_diag(rng, r, 0.5).asDiagonal() * v.adjoint();
      }
      blocks.push_back(std::move(d));
    }
    const CommutantOp split(modules[q], modules[q + 1], std::move(blocks));
    diffs.push_back(g[q + 1] * split * g[q].inverse());
  }
  return FiniteComplex(a, std::move(modules), std::move(diffs));
}

MetricFamily random_exp_family(Rng& rng, const FiniteComplex& c, double scale, bool traceless) {
  std::vector<CommutantOp> gens;
  for (const auto& m : c.degrees) {
    CommutantOp b = random_hermitian(rng, m, scale);
    if (traceless && m.dim_tau() > 0.0)
      b = b - CommutantOp::scalar(m, canonical_trace(b).real() / m.dim_tau());
    gens.push_back(std::move(b));
  }
  return MetricFamily::exponential(std::move(gens));
}

}  // namespace fkt
