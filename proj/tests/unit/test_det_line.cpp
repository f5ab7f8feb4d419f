#include <cmath>

#include "doctest.h"

#include "fkt/det_line.hpp"
#include "fkt/error.hpp"
#include "fkt/random_instances.hpp"
#include "oracles.hpp"

using namespace fkt;

namespace {

Algebra scalar_algebra() { return Algebra::make({{1, 1.0}}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("metric elements") {
  const Module k2(scalar_algebra(), {2});
  CHECK(metric_element(CommutantOp::identity(k2)).coeff == 1.0);
  CHECK(metric_element(CommutantOp::diagonal(k2, {{1.0, 4.0}})).coeff == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(code_of([&] { metric_element(CommutantOp::diagonal(k2, {{0.0, 4.0}})); }) == ErrorCode::Singular);
  CHECK(code_of([&] { metric_element(CommutantOp::diagonal(k2, {{-1.0, 4.0}})); }) == ErrorCode::NotPositive);

  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Algebra a = random_algebra(rng);
    const Module m = random_module(rng, a);
    const CommutantOp a1 = random_positive(rng, m);
    const CommutantOp b = random_positive(rng, m);
    // A2 = B^{1/2} A1 B^{1/2} keeps positivity; Det(A2) = Det(B) Det(A1)
    const CommutantOp bh = spectral_function(b, [](double x) { return std::sqrt(x); });
    const CommutantOp a2 = bh * a1 * bh;
    const double expected = std::pow(fk_determinant(b).value, -0.5) * metric_element(a1).coeff;
    CHECK(oracle::rel_err(metric_element(a2).coeff, expected) < 1e-10);
    CHECK(metric_element(a2).orientation() == 1);
  }
}

TEST_CASE("direct sums") {
  const Algebra a = scalar_algebra();
  const Module m(a, {1}), n(a, {2});
  CHECK(direct_sum(base_element(m), base_element(n)).coeff == 1.0);
  CHECK(direct_sum({m, 0.5}, {n, 3.0}).coeff == doctest::Approx(1.5));
  CHECK(direct_sum(base_element(m), base_element(n)).module == m.direct_sum(n));
  const Module other(Algebra::make({{2, 0.5}}), {1});
  CHECK(code_of([&] { direct_sum(base_element(m), base_element(other)); }) == ErrorCode::AlgebraMismatch);

  // associativity and independence of representatives
  Rng rng(4);
  const Algebra b = random_algebra(rng);
  const Module x = random_module(rng, b), y = random_module(rng, b), z = random_module(rng, b);
  const auto ex = metric_element(random_positive(rng, x));
  const auto ey = metric_element(random_positive(rng, y));
  const auto ez = metric_element(random_positive(rng, z));
  CHECK(oracle::rel_err(direct_sum(direct_sum(ex, ey), ez).coeff, direct_sum(ex, direct_sum(ey, ez)).coeff) < 1e-10);
}

TEST_CASE("induced maps") {
  const Algebra a = scalar_algebra();
  const Module k1(a, {1});
  CHECK(induced_map(CommutantOp::scalar(k1, 3.0), base_element(k1)).coeff == doctest::Approx(3.0));
  const Module k2(a, {2});
  const DetLineElement e{k2, 0.7};
  CHECK(induced_map(CommutantOp::identity(k2), e).coeff == doctest::Approx(0.7).epsilon(1e-15));
  // SL element acts trivially
  CHECK(induced_map(CommutantOp::diagonal(k2, {{2.0, 0.5}}), e).coeff == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(code_of([&] { induced_map(CommutantOp::diagonal(k2, {{0.0, 1.0}}), e); }) == ErrorCode::NotInvertible);
  const Module k3(a, {3});
  CHECK(code_of([&] { induced_map(CommutantOp::zero(k2, k3), e); }) == ErrorCode::DimensionMismatch);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Algebra b = random_algebra(rng);
    const Module m = random_module(rng, b);
    const CommutantOp f = random_invertible(rng, m, 1.0), g = random_invertible(rng, m, 1.0);
    const DetLineElement e0 = metric_element(random_positive(rng, m));
    CHECK(oracle::rel_err(induced_map(g * f, e0).coeff, induced_map(g, induced_map(f, e0)).coeff) < 1e-10);
    CHECK(oracle::rel_err(induced_map(f, e0).coeff, oracle::fk_det(f) * e0.coeff) < 1e-10);
  }
}

TEST_CASE("exact sequences") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Algebra a = random_algebra(rng);
    const Module sub = random_module(rng, a, 0, 3), quot = random_module(rng, a, 1, 3);
    const Module total = sub.direct_sum(quot);
    const DetLineElement e1 = metric_element(random_positive(rng, sub));
    const DetLineElement e2 = metric_element(random_positive(rng, quot));

    // canonical split sequence
    std::vector<Matrix> inc, proj;
    for (std::size_t i = 0; i < a.num_factors(); ++i) {
      inc.push_back(Matrix::Identity(total.mult(i), sub.mult(i)));
      Matrix p = Matrix::Zero(quot.mult(i), total.mult(i));
      p.rightCols(quot.mult(i)) = Matrix::Identity(quot.mult(i), quot.mult(i));
      proj.push_back(p);
    }
    const CommutantOp alpha0(sub, total, inc), beta0(total, quot, proj);
    CHECK(oracle::rel_err(exact_sequence_iso(e1, e2, alpha0, beta0).coeff, direct_sum(e1, e2).coeff) < 1e-12);

    // conjugate by a random automorphism g of the middle module: alpha = g alpha0, beta = beta0 g^{-1}
    const CommutantOp g = random_invertible(rng, total, 0.7);
    const CommutantOp alpha = g * alpha0, beta = beta0 * g.inverse();
    const DetLineElement via_default = exact_sequence_iso(e1, e2, alpha, beta);
    CHECK(oracle::rel_err(via_default.coeff, induced_map(g, direct_sum(e1, e2)).coeff) < 1e-9);

    // another section: s' = s + alpha k for an arbitrary k: M'' -> M'
    const CommutantOp s0 = g * CommutantOp(quot, total, [&] {
      std::vector<Matrix> b;
      for (std::size_t i = 0; i < a.num_factors(); ++i) {
        Matrix s = Matrix::Zero(total.mult(i), quot.mult(i));
        s.bottomRows(quot.mult(i)) = Matrix::Identity(quot.mult(i), quot.mult(i));
        b.push_back(s);
      }
      return b;
    }());
    const CommutantOp shifted = s0 + alpha * random_op(rng, quot, sub);
    CHECK(oracle::rel_err(exact_sequence_iso(e1, e2, alpha, beta, shifted).coeff, via_default.coeff) < 1e-9);

    // scaling alpha by an automorphism a of M' multiplies by Det|a|
    const CommutantOp scale = random_invertible(rng, sub, 0.7);
    CHECK(oracle::rel_err(exact_sequence_iso(e1, e2, alpha * scale, beta).coeff,
                          exact_sequence_iso(induced_map(scale, e1), e2, alpha, beta).coeff) < 1e-9);
  }

  // zero quotient: the iso is induced by alpha
  const Algebra a = scalar_algebra();
  const Module m(a, {2}), zero = Module::zero(a);
  const CommutantOp f = CommutantOp::diagonal(m, {{2.0, 5.0}});
  CHECK(exact_sequence_iso(base_element(m), base_element(zero), f, CommutantOp::zero(m, zero)).coeff ==
        doctest::Approx(10.0));

  // not exact
  const Module k1(a, {1});
  CHECK(code_of([&] {
          exact_sequence_iso(base_element(k1), base_element(k1), CommutantOp(k1, m, {Matrix::Ones(2, 1)}),
                             CommutantOp(m, k1, {Matrix::Ones(1, 2)}));
        }) == ErrorCode::NotExact);
}

TEST_CASE("holonomy") {
  const Algebra a = scalar_algebra();
  const Module k2(a, {2});
  const auto trivial = rep_holonomy({CommutantOp::identity(k2), CommutantOp::identity(k2)}, {{{0, 1}, {1, 1}}});
  CHECK(trivial.consistent);
  CHECK(trivial.generator_values == std::vector<double>{1.0, 1.0});

  const auto sl = rep_holonomy({CommutantOp::diagonal(k2, {{2.0, 0.5}})}, {});
  CHECK(sl.generator_values[0] == doctest::Approx(1.0).epsilon(1e-14));

  const Module k1(a, {1});
  const auto two = rep_holonomy({CommutantOp::scalar(k1, 2.0)}, {{{0, 1}, {0, 1}}});
  CHECK(!two.consistent);
  CHECK(two.max_relator_error == doctest::Approx(3.0));
  CHECK(rep_holonomy({CommutantOp::scalar(k1, 2.0)}, {}).consistent);

  CHECK(code_of([&] { rep_holonomy({CommutantOp::zero(k1, k1)}, {}); }) == ErrorCode::SingularGenerator);
  CHECK(code_of([&] { rep_holonomy({CommutantOp::identity(k1)}, {{{3, 1}}}); }) == ErrorCode::MalformedWord);
  CHECK(code_of([&] { rep_holonomy({CommutantOp::identity(k1)}, {{{0, 2}}}); }) == ErrorCode::MalformedWord);

  // unitary representation is isomorphic to the trivial one
  Rng rng(6);
  const Module m(a, {3});
  const CommutantOp u1(m, m, {random_unitary(rng, 3)}), u2(m, m, {random_unitary(rng, 3)});
  const auto unitary = rep_holonomy({u1, u2}, {{{0, 1}, {1, 1}, {0, -1}, {1, -1}}});
  const auto triv = rep_holonomy({CommutantOp::identity(m), CommutantOp::identity(m)}, {});
  CHECK(bundle_iso_exists(unitary, triv));
}

TEST_CASE("bundle isomorphism") {
  const Holonomy a{{2.0, 3.0}, true, 0.0};
  CHECK(bundle_iso_exists(a, a));
  CHECK(!bundle_iso_exists(a, Holonomy{{2.0, 3.0000001}, true, 0.0}));
  CHECK(code_of([&] { bundle_iso_exists(a, Holonomy{{2.0}, true, 0.0}); }) == ErrorCode::GeneratorCountMismatch);
  CHECK(code_of([&] { bundle_iso_exists(a, Holonomy{{2.0, 3.0}, false, 1.0}); }) ==
        ErrorCode::InconsistentHolonomy);
}

TEST_CASE("graded lines") {
  const Algebra a = scalar_algebra();
  GradedDetLine g = GradedDetLine::base({Module(a, {1}), Module(a, {2}), Module::zero(a)});
  CHECK(g.coefficient() == 1.0);
  g.lines[0].coeff = 2.0;
  g.lines[1].coeff = 4.0;
  g.scale = 3.0;
  CHECK(g.coefficient() == doctest::Approx(1.5));
  CHECK(g.graded_factor(1) == doctest::Approx(0.25));
}
