#include "fkt/det_line.hpp"

#include <cmath>
#include <string>

#include "fkt/error.hpp"

namespace fkt {

double GradedDetLine::coefficient() const {
  double c = scale;
  for (std::size_t q = 0; q < lines.size(); ++q) c *= graded_factor(q);
  return c;
}

double GradedDetLine::graded_factor(std::size_t q) const {
  return q % 2 == 0 ? lines[q].coeff : 1.0 / lines[q].coeff;
}

GradedDetLine GradedDetLine::base(const std::vector<Module>& modules) {
  GradedDetLine g;
  for (const auto& m : modules) g.lines.push_back(base_element(m));
  return g;
}

DetLineElement base_element(const Module& m) { return {m, 1.0}; }

DetLineElement metric_element(const CommutantOp& a, const SpectralTolerances& tol) {
  if (!a.is_endomorphism()) throw Error(ErrorCode::ShapeMismatch, "a metric is an endomorphism");
  const auto det = fk_determinant(a, tol);
  if (det.kernel_dim > 0.0) throw Error(ErrorCode::Singular, "metric operator has a kernel");
  return {a.domain(), std::exp(-0.5 * det.log_value)};
}

DetLineElement direct_sum(const DetLineElement& e1, const DetLineElement& e2) {
  if (!(e1.module.algebra() == e2.module.algebra()))
    throw Error(ErrorCode::AlgebraMismatch, "direct sum of determinant lines over different algebras");
  return {e1.module.direct_sum(e2.module), e1.coeff * e2.coeff};
}

DetLineElement induced_map(const CommutantOp& f, const DetLineElement& e, const SpectralTolerances& tol) {
  if (!(f.domain() == e.module)) throw Error(ErrorCode::ShapeMismatch, "map domain differs from the line's module");
  for (std::size_t i = 0; i < f.num_blocks(); ++i)
    if (f.block(i).rows() != f.block(i).cols())
      throw Error(ErrorCode::DimensionMismatch, "isomorphism needs equal multiplicities in factor " + std::to_string(i));
  double det = 0.0;
  try {
    det = fk_determinant_abs(f, tol);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::NotInvertible) throw Error(ErrorCode::NotInvertible, "induced_map");
    throw;
  }
  return {f.codomain(), det * e.coeff};
}

DetLineElement exact_sequence_iso(const DetLineElement& e1, const DetLineElement& e2, const CommutantOp& alpha,
                                  const CommutantOp& beta, const std::optional<CommutantOp>& section,
                                  double exact_tol) {
  const Module& sub = alpha.domain();
  const Module& total = alpha.codomain();
  const Module& quot = beta.codomain();
  if (!(e1.module == sub) || !(e2.module == quot) || !(beta.domain() == total))
    throw Error(ErrorCode::ShapeMismatch, "exact_sequence_iso: modules do not chain");
  const double scale = std::max({1.0, alpha.norm() * beta.norm()});
  if ((beta * alpha).norm() > exact_tol * scale) throw Error(ErrorCode::NotExact, "beta * alpha != 0");
  for (std::size_t i = 0; i < total.algebra().num_factors(); ++i)
    if (sub.mult(i) + quot.mult(i) != total.mult(i))
      throw Error(ErrorCode::NotExact, "multiplicities do not add up in factor " + std::to_string(i));

  std::vector<Matrix> sec_blocks;
  if (section) {
    if (!(section->domain() == quot) || !(section->codomain() == total))
      throw Error(ErrorCode::ShapeMismatch, "section must map M'' -> M");
    if ((beta * *section - CommutantOp::identity(quot)).norm() > exact_tol * std::max(1.0, beta.norm() * section->norm()))
      throw Error(ErrorCode::NotExact, "section is not a right inverse of beta");
    sec_blocks.assign(section->blocks().begin(), section->blocks().end());
  } else {
    // Orthogonal complement of im(alpha), mapped isomorphically by beta.
    for (std::size_t i = 0; i < total.algebra().num_factors(); ++i) {
      const Matrix& a = alpha.block(i);
      const Eigen::Index k = total.mult(i);
      const Eigen::Index kq = quot.mult(i);
      if (kq == 0) {
        sec_blocks.emplace_back(k, 0);
        continue;
      }
      Matrix proj = Matrix::Identity(k, k);
      if (a.cols() > 0) proj -= a * (a.adjoint() * a).inverse() * a.adjoint();
      const auto eig = jacobi_eigen(proj);
      Matrix complement = eig.vectors.rightCols(kq);
      Matrix b = beta.block(i) * complement;
      Eigen::FullPivLU<Matrix> lu(b);
      if (!lu.isInvertible()) throw Error(ErrorCode::NotExact, "beta is not onto");
      sec_blocks.push_back(complement * lu.inverse());
    }
  }

  // The element is the image of e1 (x) e2 under (x, y) -> alpha x + s y.
  std::vector<Matrix> joined;
  for (std::size_t i = 0; i < total.algebra().num_factors(); ++i) {
    Matrix m(total.mult(i), total.mult(i));
    m << alpha.block(i), sec_blocks[i];
    joined.push_back(std::move(m));
  }
  const CommutantOp iso(sub.direct_sum(quot), total, std::move(joined));
  double det = 0.0;
  try {
    det = fk_determinant_abs(iso);
  } catch (const Error&) {
    throw Error(ErrorCode::NotExact, "alpha is not injective");
  }
  return {total, e1.coeff * e2.coeff * det};
}

double evaluate_word(const std::vector<double>& values, const Word& word) {
  double log_v = 0.0;
  for (const auto& [j, e] : word) {
    if (j < 0 || static_cast<std::size_t>(j) >= values.size())
      throw Error(ErrorCode::MalformedWord, "generator index " + std::to_string(j));
    if (e != 1 && e != -1) throw Error(ErrorCode::MalformedWord, "exponent must be +1 or -1");
    log_v += e * std::log(values[static_cast<std::size_t>(j)]);
  }
  return std::exp(log_v);
}

Holonomy rep_holonomy(const std::vector<CommutantOp>& generators, const std::vector<Word>& relators,
                      double rel_tol) {
  Holonomy h;
  if (generators.empty()) return h;
  const Module& m = generators.front().domain();
  for (std::size_t j = 0; j < generators.size(); ++j) {
    const auto& g = generators[j];
    if (!g.is_endomorphism() || !(g.domain() == m))
      throw Error(ErrorCode::ShapeMismatch, "generators must be endomorphisms of one module");
    try {
      h.generator_values.push_back(fk_determinant_abs(g));
    } catch (const Error&) {
      throw Error(ErrorCode::SingularGenerator, "generator " + std::to_string(j));
    }
  }
  for (const auto& w : relators) {
    const double err = std::abs(evaluate_word(h.generator_values, w) - 1.0);
    h.max_relator_error = std::max(h.max_relator_error, err);
    if (err > rel_tol) h.consistent = false;
  }
  return h;
}

bool bundle_iso_exists(const Holonomy& h1, const Holonomy& h2, double rel_tol) {
  if (h1.generator_values.size() != h2.generator_values.size())
    throw Error(ErrorCode::GeneratorCountMismatch, "holonomies over different generator sets");
  if (!h1.consistent || !h2.consistent)
    throw Error(ErrorCode::InconsistentHolonomy, "holonomy violates its relators");
  for (std::size_t j = 0; j < h1.generator_values.size(); ++j) {
    const double a = h1.generator_values[j];
    const double b = h2.generator_values[j];
    if (std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b))) return false;
  }
  return true;
}

}  // namespace fkt
