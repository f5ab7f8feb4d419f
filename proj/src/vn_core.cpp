#include "fkt/vn_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fkt/error.hpp"

namespace fkt {

namespace {

constexpr double kNormalizationTol = 1e-12;

void require_same_algebra(const Module& a, const Module& b, const char* what) {
  if (!(a.algebra() == b.algebra())) throw Error(ErrorCode::AlgebraMismatch, what);
}

void require_endomorphism(const CommutantOp& t, const char* what) {
  if (!t.is_endomorphism()) throw Error(ErrorCode::ShapeMismatch, std::string(what) + " needs an endomorphism");
}

}  // namespace

// --- Algebra -------------------------------------------------------------

Algebra Algebra::make(std::vector<Factor> factors, bool auto_normalize) {
  if (factors.empty()) throw Error(ErrorCode::EmptyFactorList, "an algebra needs at least one factor");
  double total = 0.0;
  for (const auto& f : factors) {
    if (f.size < 1) throw Error(ErrorCode::InvalidArgument, "factor sizes must be >= 1");
    if (!(f.weight > 0.0) || !std::isfinite(f.weight))
      throw Error(ErrorCode::InvalidArgument, "trace weights must be positive and finite");
    total += f.weight * f.size;
  }
  if (auto_normalize) {
    for (auto& f : factors) f.weight /= total;
  } else if (std::abs(total - 1.0) > kNormalizationTol) {
    throw Error(ErrorCode::NonNormalizedTrace, "sum_i w_i n_i = " + std::to_string(total));
  }
  return Algebra(std::move(factors));
}

// --- Module --------------------------------------------------------------

Module::Module(Algebra algebra, std::vector<int> mults) : algebra_(std::move(algebra)), mults_(std::move(mults)) {
  if (mults_.size() != algebra_.num_factors())
    throw Error(ErrorCode::ShapeMismatch, "one multiplicity per factor is required");
  for (int k : mults_)
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "multiplicities must be >= 0");
}

Module Module::zero(const Algebra& algebra) { return Module(algebra, std::vector<int>(algebra.num_factors(), 0)); }

Module Module::regular(const Algebra& algebra) {
  std::vector<int> k;
  for (const auto& f : algebra.factors()) k.push_back(f.size);
  return Module(algebra, std::move(k));
}

bool Module::is_zero() const {
  return std::all_of(mults_.begin(), mults_.end(), [](int k) { return k == 0; });
}

double Module::dim_tau() const {
  double d = 0.0;
  for (std::size_t i = 0; i < mults_.size(); ++i) d += algebra_.weight(i) * mults_[i];
  return d;
}

Module Module::direct_sum(const Module& other) const {
  require_same_algebra(*this, other, "direct sum of modules over different algebras");
  std::vector<int> k(mults_.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = mults_[i] + other.mults_[i];
  return Module(algebra_, std::move(k));
}

// --- CommutantOp ---------------------------------------------------------

CommutantOp::CommutantOp(Module domain, Module codomain, std::vector<Matrix> blocks)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), blocks_(std::move(blocks)) {
  require_same_algebra(domain_, codomain_, "morphism between modules over different algebras");
  if (blocks_.size() != domain_.algebra().num_factors())
    throw Error(ErrorCode::ShapeMismatch, "one block per factor is required");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].rows() != codomain_.mult(i) || blocks_[i].cols() != domain_.mult(i))
      throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(i) + " has shape " +
                                                std::to_string(blocks_[i].rows()) + "x" +
                                                std::to_string(blocks_[i].cols()) + ", expected " +
                                                std::to_string(codomain_.mult(i)) + "x" +
                                                std::to_string(domain_.mult(i)));
  }
}

CommutantOp CommutantOp::identity(const Module& m) { return scalar(m, 1.0); }

CommutantOp CommutantOp::zero(const Module& domain, const Module& codomain) {
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < domain.algebra().num_factors(); ++i)
    b.push_back(Matrix::Zero(codomain.mult(i), domain.mult(i)));
  return CommutantOp(domain, codomain, std::move(b));
}

CommutantOp CommutantOp::scalar(const Module& m, Complex value) {
  std::vector<Matrix> b;
  for (int k : m.mults()) b.push_back(value * Matrix::Identity(k, k));
  return CommutantOp(m, m, std::move(b));
}

CommutantOp CommutantOp::diagonal(const Module& m, const std::vector<std::vector<double>>& diag) {
  if (diag.size() != m.algebra().num_factors()) throw Error(ErrorCode::ShapeMismatch, "one diagonal per factor");
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (static_cast<int>(diag[i].size()) != m.mult(i)) throw Error(ErrorCode::ShapeMismatch, "diagonal length");
    Matrix block = Matrix::Zero(m.mult(i), m.mult(i));
    for (int j = 0; j < m.mult(i); ++j) block(j, j) = diag[i][static_cast<std::size_t>(j)];
    b.push_back(std::move(block));
  }
  return CommutantOp(m, m, std::move(b));
}

bool CommutantOp::is_self_adjoint(double tol) const {
  if (!is_endomorphism()) return false;
  for (const auto& b : blocks_) {
    const double scale = std::max(1.0, b.norm());
    if ((b - b.adjoint()).norm() > tol * scale) return false;
  }
  return true;
}

double CommutantOp::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, b.norm());
  return n;
}

CommutantOp CommutantOp::adjoint() const {
  std::vector<Matrix> b;
  for (const auto& x : blocks_) b.push_back(x.adjoint());
  return CommutantOp(codomain_, domain_, std::move(b));
}

CommutantOp CommutantOp::inverse() const {
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Matrix& x = blocks_[i];
    if (x.rows() != x.cols()) throw Error(ErrorCode::NotInvertible, "non-square block " + std::to_string(i));
    if (x.rows() == 0) {
      b.emplace_back(0, 0);
      continue;
    }
    Eigen::FullPivLU<Matrix> lu(x);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw Error(ErrorCode::NotInvertible, "singular block " + std::to_string(i));
    b.push_back(lu.inverse());
  }
  return CommutantOp(codomain_, domain_, std::move(b));
}

CommutantOp CommutantOp::operator+(const CommutantOp& rhs) const {
  if (!(domain_ == rhs.domain_) || !(codomain_ == rhs.codomain_)) throw Error(ErrorCode::ShapeMismatch, "sum");
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] + rhs.blocks_[i]);
  return CommutantOp(domain_, codomain_, std::move(b));
}

CommutantOp CommutantOp::operator-(const CommutantOp& rhs) const { return *this + rhs * Complex(-1.0); }

CommutantOp CommutantOp::operator*(const CommutantOp& rhs) const {
  if (!(rhs.codomain_ == domain_)) throw Error(ErrorCode::ShapeMismatch, "composition of incompatible morphisms");
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] * rhs.blocks_[i]);
  return CommutantOp(rhs.domain_, codomain_, std::move(b));
}

CommutantOp CommutantOp::operator*(Complex s) const {
  std::vector<Matrix> b;
  for (const auto& x : blocks_) b.push_back(s * x);
  return CommutantOp(domain_, codomain_, std::move(b));
}

CommutantOp CommutantOp::direct_sum(const CommutantOp& other) const {
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Matrix& x = blocks_[i];
    const Matrix& y = other.blocks_[i];
    Matrix z = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
    z.topLeftCorner(x.rows(), x.cols()) = x;
    z.bottomRightCorner(y.rows(), y.cols()) = y;
    b.push_back(std::move(z));
  }
  return CommutantOp(domain_.direct_sum(other.domain_), codomain_.direct_sum(other.codomain_), std::move(b));
}

// --- traces and spectra --------------------------------------------------

double SpectralDensity::total() const {
  double s = 0.0;
  for (const auto& st : steps) s += st.jump;
  return s;
}

Complex canonical_trace(const CommutantOp& t) {
  require_endomorphism(t, "canonical_trace");
  Complex s = 0.0;
  const auto& alg = t.domain().algebra();
  for (std::size_t i = 0; i < t.num_blocks(); ++i) s += alg.weight(i) * t.block(i).trace();
  return s;
}

double tau_dimension(const Module& m) { return m.dim_tau(); }

double tau_dimension(const CommutantOp& p, double tol) {
  if (!p.is_endomorphism()) throw Error(ErrorCode::NotAProjection, "a projection is an endomorphism");
  for (const auto& b : p.blocks()) {
    const double scale = std::max(1.0, b.norm());
    if ((b - b.adjoint()).norm() > tol * scale || (b * b - b).norm() > tol * scale)
      throw Error(ErrorCode::NotAProjection, "operator is not a self-adjoint idempotent");
  }
  return canonical_trace(p).real();
}

double kernel_threshold(double lambda_max, const SpectralTolerances& tol) {
  return tol.kernel_rel * std::max(lambda_max, 1.0);
}

SpectralDensity spectral_density(const CommutantOp& a, const SpectralTolerances& tol) {
  require_endomorphism(a, "spectral_density");
  if (!a.is_self_adjoint(tol.self_adjoint)) throw Error(ErrorCode::NotSelfAdjoint, "spectral_density");
  std::vector<SpectralStep> raw;
  const auto& alg = a.domain().algebra();
  double max_abs = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i).rows() == 0) continue;
    const auto eig = jacobi_eigen(a.block(i));
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      raw.push_back({eig.values(j), alg.weight(i)});
      max_abs = std::max(max_abs, std::abs(eig.values(j)));
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  SpectralDensity out;
  const double merge = tol.merge_rel * max_abs;
  // Clusters are anchored at their first eigenvalue so merging cannot chain.
  std::size_t i = 0;
  while (i < raw.size()) {
    const double anchor = raw[i].lambda;
    double jump = 0.0;
    double moment = 0.0;
    while (i < raw.size() && raw[i].lambda - anchor <= merge) {
      jump += raw[i].jump;
      moment += raw[i].jump * raw[i].lambda;
      ++i;
    }
    out.steps.push_back({moment / jump, jump});
  }
  return out;
}

CommutantOp spectral_function(const CommutantOp& a, const std::function<double(double)>& f, double self_adjoint_tol) {
  require_endomorphism(a, "spectral_function");
  if (!a.is_self_adjoint(self_adjoint_tol)) throw Error(ErrorCode::NotSelfAdjoint, "spectral_function");
  std::vector<Matrix> b;
  for (const auto& x : a.blocks()) {
    if (x.rows() == 0) {
      b.emplace_back(0, 0);
      continue;
    }
    const auto eig = jacobi_eigen(x);
    Vector fv(eig.values.size());
    for (Eigen::Index j = 0; j < fv.size(); ++j) fv(j) = f(eig.values(j));
    b.push_back(eig.vectors * fv.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
  }
  return CommutantOp(a.domain(), a.codomain(), std::move(b));
}

FkDeterminant fk_determinant(const CommutantOp& a, const SpectralTolerances& tol) {
  const auto density = spectral_density(a, tol);
  FkDeterminant out;
  if (density.steps.empty()) return out;
  const double lambda_max = density.steps.back().lambda;
  const double lambda_min = density.steps.front().lambda;
  if (lambda_min < -tol.negative * std::max(lambda_max, 1.0))
    throw Error(ErrorCode::NotPositive, "eigenvalue " + std::to_string(lambda_min));
  const double zero = kernel_threshold(lambda_max, tol);
  double log_det = 0.0;
  for (const auto& st : density.steps) {
    if (st.lambda < zero) {
      out.kernel_dim += st.jump;
      continue;
    }
    log_det += st.jump * std::log(st.lambda);
  }
  out.log_value = log_det;
  out.value = std::exp(log_det);
  return out;
}

double fk_determinant_abs(const CommutantOp& t, const SpectralTolerances& tol) {
  const auto det = fk_determinant(t.adjoint() * t, tol);
  if (det.kernel_dim > 0.0) throw Error(ErrorCode::NotInvertible, "fk_determinant_abs of a singular morphism");
  return std::exp(0.5 * det.log_value);
}

// --- path formula --------------------------------------------------------

namespace {

// Fourth-order derivative of the sampled family at index j with spacing h
// (stride `s` in the sample array).
CommutantOp sample_derivative(std::span<const CommutantOp> x, std::size_t j, std::size_t s, std::size_t n, double h) {
  auto at = [&](std::size_t k) -> const CommutantOp& { return x[k * s]; };
  const double inv = 1.0 / (12.0 * h);
  if (j >= 2 && j + 2 <= n)
    return (at(j - 2) - at(j + 2) + (at(j + 1) - at(j - 1)) * Complex(8.0)) * Complex(inv);
  if (j == 0)
    return (at(0) * Complex(-25.0) + at(1) * Complex(48.0) - at(2) * Complex(36.0) + at(3) * Complex(16.0) -
            at(4) * Complex(3.0)) *
           Complex(inv);
  if (j == 1)
    return (at(0) * Complex(-3.0) - at(1) * Complex(10.0) + at(2) * Complex(18.0) - at(3) * Complex(6.0) + at(4)) *
           Complex(inv);
  if (j == n)
    return (at(n) * Complex(25.0) - at(n - 1) * Complex(48.0) + at(n - 2) * Complex(36.0) -
            at(n - 3) * Complex(16.0) + at(n - 4) * Complex(3.0)) *
           Complex(inv);
  // j == n - 1
  return (at(n) * Complex(3.0) + at(n - 1) * Complex(10.0) - at(n - 2) * Complex(18.0) + at(n - 3) * Complex(6.0) -
          at(n - 4)) *
         Complex(inv);
}

double simpson_log_det(std::span<const CommutantOp> samples, std::size_t stride) {
  const std::size_t n = (samples.size() - 1) / stride;
  const double h = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const CommutantOp& a = samples[j * stride];
    CommutantOp inv = [&] {
      try {
        return a.inverse();
      } catch (const Error&) {
        throw Error(ErrorCode::SingularSample, "sample " + std::to_string(j * stride) + " is not invertible");
      }
    }();
    const double g = canonical_trace(inv * sample_derivative(samples, j, stride, n, h)).real();
    const double w = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    sum += w * g;
  }
  return sum * h / 3.0;
}

}  // namespace

PathDeterminant fk_determinant_path(std::span<const CommutantOp> samples) {
  if (samples.size() < 9 || (samples.size() - 1) % 4 != 0)
    throw Error(ErrorCode::InvalidArgument, "path needs N + 1 samples with N a positive multiple of 4, N >= 8");
  const CommutantOp& a0 = samples.front();
  if (!a0.is_endomorphism()) throw Error(ErrorCode::ShapeMismatch, "path samples must be endomorphisms");
  for (const auto& s : samples)
    if (!(s.domain() == a0.domain()) || !s.is_endomorphism())
      throw Error(ErrorCode::ShapeMismatch, "path samples must act on one module");
  if ((a0 - CommutantOp::identity(a0.domain())).norm() > 1e-10)
    throw Error(ErrorCode::PathNotAtIdentity, "A_0 differs from the identity");

  const double fine = simpson_log_det(samples, 1);
  const double coarse = simpson_log_det(samples, 2);
  const double extrapolated = (16.0 * fine - coarse) / 15.0;
  PathDeterminant out;
  out.log_value = extrapolated;
  out.value = std::exp(extrapolated);
  out.error_estimate = std::abs(extrapolated - fine);
  return out;
}

PathDeterminant fk_determinant_path(const std::function<CommutantOp(double)>& path, int intervals) {
  if (intervals < 8 || intervals % 4 != 0)
    throw Error(ErrorCode::InvalidArgument, "intervals must be a positive multiple of 4, >= 8");
  std::vector<CommutantOp> samples;
  samples.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int j = 0; j <= intervals; ++j) samples.push_back(path(static_cast<double>(j) / intervals));
  return fk_determinant_path(samples);
}

}  // namespace fkt
