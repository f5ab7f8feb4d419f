#include <cmath>

#include "doctest.h"

#include "fkt/error.hpp"
#include "fkt/hilbert_complex.hpp"
#include "fkt/random_instances.hpp"
#include "oracles.hpp"

using namespace fkt;

namespace {

Algebra scalar_algebra() { return Algebra::make({{1, 1.0}}); }

FiniteComplex two_term(const Algebra& a, const Matrix& d) {
  const Module m0(a, {static_cast<int>(d.cols())}), m1(a, {static_cast<int>(d.rows())});
  return FiniteComplex(a, {m0, m1}, {CommutantOp(m0, m1, {d})});
}

FiniteComplex zero_complex(const Module& m, int degrees) {
  std::vector<Module> mods(static_cast<std::size_t>(degrees), m);
  std::vector<CommutantOp> diffs;
  for (int q = 0; q + 1 < degrees; ++q) diffs.push_back(CommutantOp::zero(m, m));
  return FiniteComplex(m.algebra(), mods, diffs);
}

}  // namespace

TEST_CASE("validation") {
  const Algebra a = scalar_algebra();
  const Module k1(a, {1});
  CHECK(validate_complex(zero_complex(k1, 3)).valid);

  const FiniteComplex chain(a, {k1, k1, k1}, {CommutantOp::scalar(k1, 1.0), CommutantOp::scalar(k1, 1.0)});
  const auto rep = validate_complex(chain);
  CHECK(!rep.valid);
  CHECK(rep.max_violation == doctest::Approx(1.0));
  CHECK(rep.problems.size() == 1);

  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(validate_complex(random_complex(rng, random_algebra(rng), {4, 6, 2})).valid);

  CHECK_THROWS_AS(FiniteComplex(a, {k1, k1}, {}), Error);
  CHECK_THROWS_AS(FiniteComplex(a, {k1, Module(a, {2})}, {CommutantOp::scalar(k1, 1.0)}), Error);
}

TEST_CASE("Laplacians") {
  const Algebra a = scalar_algebra();
  const FiniteComplex c = two_term(a, Matrix::Constant(1, 1, 2.0));
  const MetricFamily flat = MetricFamily::constant(c);
  CHECK(laplacian(c, flat, 0, 0.0).block(0)(0, 0).real() == doctest::Approx(4.0));
  CHECK(laplacian(c, flat, 1, 0.0).block(0)(0, 0).real() == doctest::Approx(4.0));

  const Module k2(a, {2});
  CHECK(laplacian(zero_complex(k2, 2), MetricFamily::constant(zero_complex(k2, 2)), 1, 0.3).norm() == 0.0);

  try {
    laplacian(c, flat, 2, 0.0);
    FAIL("expected DegreeOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeOutOfRange);
  }

  // conformal families with one rate leave the Laplacian unchanged
  Rng rng(3);
  const FiniteComplex r = random_complex(rng, random_algebra(rng), {3, 5, 2});
  const MetricFamily conf = MetricFamily::conformal(r, 0.8);
  for (int q = 0; q <= r.top_degree(); ++q)
    CHECK((laplacian(r, conf, q, 0.7) - laplacian(r, MetricFamily::constant(r), q, 0.0)).norm() < 1e-12);
}

TEST_CASE("Laplacian properties on random complexes") {
  Rng rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const FiniteComplex c = random_complex(rng, random_algebra(rng), {4, 6, 2});
    const MetricFamily mf = random_exp_family(rng, c, 0.5);
    const double u = rng.uniform(-1.0, 1.0);
    for (int q = 0; q <= c.top_degree(); ++q) {
      const CommutantOp box = laplacian(c, mf, q, u);
      // self-adjoint in the u-metric: A box is base self-adjoint
      const CommutantOp ab = mf.metric(q, u) * box;
      CHECK((ab - ab.adjoint()).norm() < 1e-9 * std::max(1.0, ab.norm()));
      // the Hermitian form has the same spectrum and it is nonnegative
      for (const auto& s : spectral_density(hermitian_laplacian(c, mf, q, u)).steps) CHECK(s.lambda > -1e-10);
      if (q < c.top_degree()) {
        const auto& d = c.differentials[static_cast<std::size_t>(q)];
        const CommutantOp lhs = d * box, rhs = laplacian(c, mf, q + 1, u) * d;
        CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, d.norm() * box.norm()));
      }
    }
  }
}

TEST_CASE("Hodge projectors: examples") {
  const Algebra a = scalar_algebra();
  const Module k2(a, {2});
  const FiniteComplex z = zero_complex(k2, 2);
  const auto p = hodge_projectors(z, MetricFamily::constant(z), 0, 0.0);
  CHECK((p.harmonic - CommutantOp::identity(k2)).norm() < 1e-14);
  CHECK(p.exact.norm() == 0.0);
  CHECK(p.coexact.norm() == 0.0);

  const FiniteComplex acyclic = two_term(a, Matrix::Constant(1, 1, 2.0));
  CHECK(hodge_projectors(acyclic, MetricFamily::constant(acyclic), 0, 0.0).harmonic.norm() < 1e-14);
  CHECK(betti(acyclic, MetricFamily::constant(acyclic), 0, 0.0) == 0.0);
  CHECK(betti(acyclic, MetricFamily::constant(acyclic), 1, 0.0) == 0.0);

  const Module half(Algebra::make({{2, 0.25}, {1, 0.5}}), {3, 1});
  const FiniteComplex zh = zero_complex(half, 1);
  CHECK(betti(zh, MetricFamily::constant(zh), 0, 0.0) == doctest::Approx(1.25));

  Matrix rank1(2, 2);
  rank1 << 1.0, 2.0, 2.0, 4.0;
  const FiniteComplex r1 = two_term(a, rank1);
  CHECK(betti(r1, MetricFamily::constant(r1), 0, 0.0) == doctest::Approx(1.0));
  CHECK(betti(r1, MetricFamily::constant(r1), 1, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("Hodge decomposition on random complexes") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteComplex c = random_complex(rng, random_algebra(rng), {4, 6, 2});
    const MetricFamily mf = random_exp_family(rng, c, 0.5);
    const double u = rng.uniform(-1.0, 1.0);
    double chi_b = 0.0;
    for (int q = 0; q <= c.top_degree(); ++q) {
      const Module& m = c.degrees[static_cast<std::size_t>(q)];
      const auto p = hodge_projectors(c, mf, q, u);
      const CommutantOp id = CommutantOp::identity(m);
      CHECK((p.harmonic + p.exact + p.coexact - id).norm() < 1e-9);
      for (const auto* x : {&p.harmonic, &p.exact, &p.coexact}) {
        CHECK((*x * *x - *x).norm() < 1e-9);
        // u-self-adjoint: A P = P^* A
        const CommutantOp ax = mf.metric(q, u) * *x;
        CHECK((ax - ax.adjoint()).norm() < 1e-9 * std::max(1.0, ax.norm()));
      }
      CHECK((p.harmonic * p.exact).norm() < 1e-9);
      CHECK((p.exact * p.coexact).norm() < 1e-9);
      CHECK((p.coexact * p.harmonic).norm() < 1e-9);

      // rank-nullity oracle: b_q = dim C^q - rank d_q - rank d_{q-1}
      double expected = m.dim_tau();
      if (q < c.top_degree()) expected -= oracle::tau_rank(c.differentials[static_cast<std::size_t>(q)]);
      if (q > 0) expected -= oracle::tau_rank(c.differentials[static_cast<std::size_t>(q - 1)]);
      const double b = betti(c, mf, q, u);
      CHECK(b == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(canonical_trace(p.harmonic) - b) < 1e-9);
      CHECK(std::abs(b - betti(c, mf, q, 0.0)) < 1e-9);
      chi_b += (q % 2 == 0 ? 1.0 : -1.0) * b;
    }
    CHECK(std::abs(chi_b - c.euler_characteristic_tau()) < 1e-9);
  }
}

TEST_CASE("harmonic projector is smooth and trace-preserving in u") {
  Rng rng(13);
  const FiniteComplex c = random_complex(rng, random_algebra(rng), {3, 5, 2});
  const MetricFamily mf = random_exp_family(rng, c, 0.6);
  const double h = 1e-4;
  for (int q = 0; q <= c.top_degree(); ++q) {
    const auto pp = hodge_projectors(c, mf, q, h).harmonic;
    const auto p0 = hodge_projectors(c, mf, q, 0.0).harmonic;
    const auto pm = hodge_projectors(c, mf, q, -h).harmonic;
    const CommutantOp dot = (pp - pm) * Complex(1.0 / (2 * h));
    CHECK(std::abs(canonical_trace(dot)) < 1e-6);
    const CommutantOp second = (pp - p0 * Complex(2.0) + pm) * Complex(1.0 / (h * h));
    CHECK(second.norm() < 1e3);
  }
}

TEST_CASE("metric families") {
  Rng rng(17);
  const FiniteComplex c = random_complex(rng, random_algebra(rng), {3, 4, 2});
  const MetricFamily mf = random_exp_family(rng, c, 0.5);
  for (int q = 0; q <= c.top_degree(); ++q) {
    const Module& m = c.degrees[static_cast<std::size_t>(q)];
    CHECK((mf.metric(q, 0.0) - CommutantOp::identity(m)).norm() < 1e-12);
    const CommutantOp s = mf.metric_sqrt(q, 0.4);
    CHECK((s * s - mf.metric(q, 0.4)).norm() < 1e-12);
    CHECK((mf.metric_inv_sqrt(q, 0.4) * s - CommutantOp::identity(m)).norm() < 1e-12);
  }

  // sampled family with and without a derivative
  const MetricFamily sampled = MetricFamily::sampled(
      c.num_degrees(), [&](int q, double u) { return mf.metric(q, u); },
      [&](int q, double u) { return mf.metric(q, u) * mf.z(q, u); });
  for (int q = 0; q <= c.top_degree(); ++q) {
    CHECK((sampled.z(q, 0.3) - mf.z(q, 0.3)).norm() < 1e-10);
    CHECK((laplacian(c, sampled, q, 0.3) - laplacian(c, mf, q, 0.3)).norm() < 1e-9);
  }
  const MetricFamily no_deriv = MetricFamily::sampled(c.num_degrees(), [&](int q, double u) { return mf.metric(q, u); });
  try {
    no_deriv.z(0, 0.0);
    FAIL("expected MissingDerivative");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingDerivative);
  }
  const Module k1(scalar_algebra(), {1});
  CHECK_THROWS_AS(MetricFamily::exponential({CommutantOp(k1, k1, {Matrix::Constant(1, 1, Complex(0, 1))})}), Error);
}
