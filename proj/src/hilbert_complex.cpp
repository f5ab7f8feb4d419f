#include "fkt/hilbert_complex.hpp"

#include <cmath>

#include "fkt/error.hpp"

namespace fkt {

// --- FiniteComplex -------------------------------------------------------

FiniteComplex::FiniteComplex(Algebra alg, std::vector<Module> deg, std::vector<CommutantOp> diffs, int p)
    : algebra(std::move(alg)), degrees(std::move(deg)), differentials(std::move(diffs)), p_label(p) {
  if (degrees.empty()) throw Error(ErrorCode::ShapeMismatch, "a complex needs at least one degree");
  if (differentials.size() + 1 != degrees.size())
    throw Error(ErrorCode::ShapeMismatch, "need exactly one differential between consecutive degrees");
  for (const auto& m : degrees)
    if (!(m.algebra() == algebra)) throw Error(ErrorCode::AlgebraMismatch, "degree over a different algebra");
  for (std::size_t q = 0; q < differentials.size(); ++q)
    if (!(differentials[q].domain() == degrees[q]) || !(differentials[q].codomain() == degrees[q + 1]))
      throw Error(ErrorCode::ShapeMismatch, "d_" + std::to_string(q) + " does not map C^q -> C^{q+1}");
}

double FiniteComplex::euler_characteristic_tau() const {
  double chi = 0.0;
  for (std::size_t q = 0; q < degrees.size(); ++q) chi += (q % 2 == 0 ? 1.0 : -1.0) * degrees[q].dim_tau();
  return chi;
}

FiniteComplex FiniteComplex::direct_sum(const FiniteComplex& other) const {
  if (other.degrees.size() != degrees.size()) throw Error(ErrorCode::ShapeMismatch, "complexes of different length");
  std::vector<Module> deg;
  std::vector<CommutantOp> diffs;
  for (std::size_t q = 0; q < degrees.size(); ++q) deg.push_back(degrees[q].direct_sum(other.degrees[q]));
  for (std::size_t q = 0; q < differentials.size(); ++q)
    diffs.push_back(differentials[q].direct_sum(other.differentials[q]));
  return FiniteComplex(algebra, std::move(deg), std::move(diffs), p_label);
}

ComplexReport validate_complex(const FiniteComplex& c, double rel_tol) {
  ComplexReport r;
  for (std::size_t q = 0; q + 1 < c.differentials.size(); ++q) {
    const auto& d0 = c.differentials[q];
    const auto& d1 = c.differentials[q + 1];
    const double v = (d1 * d0).norm();
    r.d_squared.push_back(v);
    r.max_violation = std::max(r.max_violation, v);
    const double scale = std::max(1.0, d0.norm() * d1.norm());
    if (v > rel_tol * scale) {
      r.valid = false;
      r.problems.push_back("d_" + std::to_string(q + 1) + " d_" + std::to_string(q) + " != 0 (norm " +
                           std::to_string(v) + ")");
    }
  }
  return r;
}

// --- MetricFamily --------------------------------------------------------

struct MetricFamily::Impl {
  std::size_t n = 0;
  bool exponential = false;
  std::vector<CommutantOp> generators;
  std::vector<std::vector<HermitianEigen>> eig;  // per degree, per factor
  OpFn metric;
  OpFn derivative;

  CommutantOp exp_power(int q, double u, double power) const {
    const auto& b = generators[static_cast<std::size_t>(q)];
    std::vector<Matrix> blocks;
    for (std::size_t i = 0; i < b.num_blocks(); ++i) {
      const auto& e = eig[static_cast<std::size_t>(q)][i];
      if (e.values.size() == 0) {
        blocks.emplace_back(0, 0);
        continue;
      }
      Eigen::VectorXcd f = (power * u * e.values.array()).exp().cast<Complex>();
      blocks.push_back(e.vectors * f.asDiagonal() * e.vectors.adjoint());
    }
    return CommutantOp(b.domain(), b.codomain(), std::move(blocks));
  }
};

MetricFamily MetricFamily::exponential(std::vector<CommutantOp> generators) {
  auto impl = std::make_shared<Impl>();
  impl->n = generators.size();
  impl->exponential = true;
  for (const auto& b : generators) {
    if (!b.is_self_adjoint(1e-10)) throw Error(ErrorCode::NotSelfAdjoint, "metric generators must be self-adjoint");
    std::vector<HermitianEigen> per_factor;
    for (const auto& blk : b.blocks()) per_factor.push_back(blk.rows() ? jacobi_eigen(blk) : HermitianEigen{});
    impl->eig.push_back(std::move(per_factor));
  }
  impl->generators = std::move(generators);
  return MetricFamily(std::move(impl));
}

MetricFamily MetricFamily::conformal(const FiniteComplex& c, double rate) {
  std::vector<CommutantOp> g;
  for (const auto& m : c.degrees) g.push_back(CommutantOp::scalar(m, rate));
  return exponential(std::move(g));
}

MetricFamily MetricFamily::constant(const FiniteComplex& c) { return conformal(c, 0.0); }

MetricFamily MetricFamily::sampled(std::size_t num_degrees, OpFn metric, OpFn derivative) {
  auto impl = std::make_shared<Impl>();
  impl->n = num_degrees;
  impl->metric = std::move(metric);
  impl->derivative = std::move(derivative);
  return MetricFamily(std::move(impl));
}

std::size_t MetricFamily::num_degrees() const { return impl_->n; }
bool MetricFamily::is_exponential() const { return impl_->exponential; }
const std::vector<CommutantOp>& MetricFamily::generators() const { return impl_->generators; }

namespace {
void check_degree(const MetricFamily& mf, int q) {
  if (q < 0 || static_cast<std::size_t>(q) >= mf.num_degrees())
    throw Error(ErrorCode::DegreeOutOfRange, "degree " + std::to_string(q));
}
}  // namespace

CommutantOp MetricFamily::metric(int q, double u) const {
  check_degree(*this, q);
  if (impl_->exponential) return impl_->exp_power(q, u, 1.0);
  return impl_->metric(q, u);
}

CommutantOp MetricFamily::metric_sqrt(int q, double u) const {
  check_degree(*this, q);
  if (impl_->exponential) return impl_->exp_power(q, u, 0.5);
  return spectral_function(metric(q, u), [](double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::NotPositive, "metric is not positive definite");
    return std::sqrt(x);
  });
}

CommutantOp MetricFamily::metric_inv_sqrt(int q, double u) const {
  check_degree(*this, q);
  if (impl_->exponential) return impl_->exp_power(q, u, -0.5);
  return spectral_function(metric(q, u), [](double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::NotPositive, "metric is not positive definite");
    return 1.0 / std::sqrt(x);
  });
}

CommutantOp MetricFamily::z(int q, double u) const {
  check_degree(*this, q);
  if (impl_->exponential) return impl_->generators[static_cast<std::size_t>(q)];
  if (!impl_->derivative) throw Error(ErrorCode::MissingDerivative, "metric family has no derivative");
  return metric(q, u).inverse() * impl_->derivative(q, u);
}

// --- Laplacians and Hodge theory -----------------------------------------

namespace {

void check_degree(const FiniteComplex& c, const MetricFamily& mf, int q) {
  if (q < 0 || q > c.top_degree()) throw Error(ErrorCode::DegreeOutOfRange, "degree " + std::to_string(q));
  if (mf.num_degrees() != c.num_degrees())
    throw Error(ErrorCode::ShapeMismatch, "metric family and complex have different lengths");
}

/// d_q in u-orthonormal coordinates: A_{q+1}^{1/2} d_q A_q^{-1/2}.
CommutantOp normalized_differential(const FiniteComplex& c, const MetricFamily& mf, int q, double u) {
  return mf.metric_sqrt(q + 1, u) * c.differentials[static_cast<std::size_t>(q)] * mf.metric_inv_sqrt(q, u);
}

/// Orthogonal projector onto the range of an operator (base metric), per block.
CommutantOp range_projector(const CommutantOp& x, const SpectralTolerances& tol) {
  const CommutantOp gram = x * x.adjoint();
  std::vector<Matrix> blocks;
  for (const auto& g : gram.blocks()) {
    const Eigen::Index k = g.rows();
    if (k == 0) {
      blocks.emplace_back(0, 0);
      continue;
    }
    const auto eig = jacobi_eigen(g);
    const double zero = kernel_threshold(eig.values(k - 1), tol);
    Matrix p = Matrix::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
      if (eig.values(j) >= zero) p += eig.vectors.col(j) * eig.vectors.col(j).adjoint();
    blocks.push_back(std::move(p));
  }
  return CommutantOp(gram.domain(), gram.codomain(), std::move(blocks));
}

}  // namespace

CommutantOp laplacian(const FiniteComplex& c, const MetricFamily& mf, int q, double u) {
  check_degree(c, mf, q);
  const Module& m = c.degrees[static_cast<std::size_t>(q)];
  CommutantOp box = CommutantOp::zero(m, m);
  const CommutantOp a_inv = mf.metric(q, u).inverse();
  if (q < c.top_degree()) {
    const auto& d = c.differentials[static_cast<std::size_t>(q)];
    box = box + a_inv * d.adjoint() * mf.metric(q + 1, u) * d;
  }
  if (q > 0) {
    const auto& d = c.differentials[static_cast<std::size_t>(q - 1)];
    box = box + d * mf.metric(q - 1, u).inverse() * d.adjoint() * mf.metric(q, u);
  }
  return box;
}

CommutantOp hermitian_laplacian(const FiniteComplex& c, const MetricFamily& mf, int q, double u) {
  check_degree(c, mf, q);
  const Module& m = c.degrees[static_cast<std::size_t>(q)];
  CommutantOp box = CommutantOp::zero(m, m);
  if (q < c.top_degree()) {
    const auto d = normalized_differential(c, mf, q, u);
    box = box + d.adjoint() * d;
  }
  if (q > 0) {
    const auto d = normalized_differential(c, mf, q - 1, u);
    box = box + d * d.adjoint();
  }
  // Symmetrize away rounding so downstream self-adjointness checks hold.
  return (box + box.adjoint()) * Complex(0.5);
}

std::vector<Matrix> harmonic_basis_orthonormal(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                                               const SpectralTolerances& tol) {
  const CommutantOp box = hermitian_laplacian(c, mf, q, u);
  double lambda_max = 0.0;
  std::vector<HermitianEigen> eig;
  for (const auto& b : box.blocks()) {
    eig.push_back(b.rows() ? jacobi_eigen(b) : HermitianEigen{});
    if (b.rows()) lambda_max = std::max(lambda_max, eig.back().values(b.rows() - 1));
  }
  const double zero = kernel_threshold(lambda_max, tol);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const Eigen::Index k = box.block(i).rows();
    Eigen::Index h = 0;
    while (h < k && eig[i].values(h) < zero) ++h;
    out.push_back(k ? Matrix(eig[i].vectors.leftCols(h)) : Matrix(0, 0));
  }
  return out;
}

HodgeProjectors hodge_projectors(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                                 const SpectralTolerances& tol) {
  check_degree(c, mf, q);
  const Module& m = c.degrees[static_cast<std::size_t>(q)];
  const auto basis = harmonic_basis_orthonormal(c, mf, q, u, tol);
  std::vector<Matrix> hb;
  for (const auto& v : basis) hb.push_back(v * v.adjoint());
  const CommutantOp harm_t(m, m, std::move(hb));
  const CommutantOp exact_t = q > 0 ? range_projector(normalized_differential(c, mf, q - 1, u), tol)
                                    : CommutantOp::zero(m, m);
  const CommutantOp coexact_t = q < c.top_degree()
                                    ? range_projector(normalized_differential(c, mf, q, u).adjoint(), tol)
                                    : CommutantOp::zero(m, m);
  // Back from u-orthonormal coordinates: P = A^{-1/2} P~ A^{1/2}.
  const CommutantOp s = mf.metric_sqrt(q, u);
  const CommutantOp s_inv = mf.metric_inv_sqrt(q, u);
  return {s_inv * harm_t * s, s_inv * exact_t * s, s_inv * coexact_t * s};
}

double betti(const FiniteComplex& c, const MetricFamily& mf, int q, double u, const SpectralTolerances& tol) {
  check_degree(c, mf, q);
  const auto basis = harmonic_basis_orthonormal(c, mf, q, u, tol);
  double b = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) b += c.algebra.weight(i) * static_cast<double>(basis[i].cols());
  return b;
}

}  // namespace fkt
