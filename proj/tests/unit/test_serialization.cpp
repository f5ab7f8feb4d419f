#include <sstream>

#include "doctest.h"

#include "fkt/error.hpp"
#include "fkt/random_instances.hpp"
#include "fkt/serialization.hpp"

using namespace fkt;

namespace {

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

TEST_CASE("algebras and operators") {
  const Json a = parse_json_text(R"({"factors": [[2, 0.25], [1, 0.5]]})");
  const Algebra alg = algebra_from_json(a);
  CHECK(alg.num_factors() == 2);
  CHECK(algebra_from_json(algebra_to_json(alg)) == alg);
  CHECK(code_of([] { algebra_from_json(parse_json_text(R"({"factors": [[2, 0.5], [1, 0.5]]})")); }) ==
        ErrorCode::NonNormalizedTrace);
  CHECK(algebra_from_json(parse_json_text(R"({"factors": [[2, 1], [1, 1]], "normalize": true})")).factors()[0].weight ==
        doctest::Approx(1.0 / 3.0));

  const Json op = parse_json_text(R"({"factors": [[1, 1.0]], "mults": [2], "blocks": [[2, 0, [0, 1], 3]]})");
  const CommutantOp o = op_from_json(op);
  CHECK(o.block(0)(0, 0) == Complex(2.0));
  CHECK(o.block(0)(1, 0) == Complex(0.0, 1.0));
  CHECK(o.block(0)(1, 1) == Complex(3.0));

  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Algebra r = random_algebra(rng);
    const Module m = random_module(rng, r), n = random_module(rng, r);
    const CommutantOp x = random_op(rng, m, n);
    const CommutantOp back = op_from_json(parse_json_text(op_to_json(x).dump()));
    CHECK((back - x).norm() == 0.0);
    CHECK(module_from_json(module_to_json(m)) == m);
  }

  CHECK(code_of([] { op_from_json(parse_json_text(R"({"factors": [[1, 1.0]], "mults": [2], "blocks": [[1, 2, 3]]})")); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("complexes") {
  Rng rng(2);
  const FiniteComplex c = random_complex(rng, random_algebra(rng), {3, 4, 2});
  const MetricFamily mf = random_exp_family(rng, c, 0.5);
  const ComplexInstance back = complex_from_json(parse_json_text(complex_to_json(c, mf).dump()));
  CHECK(back.complex.num_degrees() == c.num_degrees());
  for (std::size_t q = 0; q < c.differentials.size(); ++q)
    CHECK((back.complex.differentials[q] - c.differentials[q]).norm() == 0.0);
  for (int q = 0; q < c.num_degrees(); ++q) CHECK((back.metric.metric(q, 0.3) - mf.metric(q, 0.3)).norm() < 1e-15);

  Json j = complex_to_json(c, mf);
  j["metric"] = {{"type", "conformal"}, {"rate", 2.0}};
  const auto conf = complex_from_json(j);
  CHECK(conf.metric.metric(1, 0.5).block(0)(0, 0).real() == doctest::Approx(std::exp(1.0)));
  j.erase("metric");
  CHECK((complex_from_json(j).metric.metric(0, 4.0) - CommutantOp::identity(c.degrees[0])).norm() == 0.0);
  j["metric"] = {{"type", "wobbly"}};
  CHECK(code_of([&] { complex_from_json(j); }) == ErrorCode::ParseError);
}

TEST_CASE("holonomy and forms") {
  const Json h = parse_json_text(
      R"({"generators": [{"factors": [[1, 1.0]], "mults": [1], "blocks": [[2]]},
                          {"factors": [[1, 1.0]], "mults": [1], "blocks": [[0.5]]}],
          "relators": [[[0, 1], [1, -1]]]})");
  const HolonomyInstance inst = holonomy_from_json(h);
  CHECK(inst.generators.size() == 2);
  CHECK(inst.relators.size() == 1);
  CHECK(inst.relators[0][1].first == 1);
  CHECK(inst.relators[0][1].second == -1);
  const HolonomyInstance again = holonomy_from_json(holonomy_to_json(inst));
  CHECK(again.relators[0].size() == 2);
  CHECK((again.generators[1] - inst.generators[1]).norm() == 0.0);

  const Json f = parse_json_text(
      R"({"dim2n": 4, "size": 2, "entries": [[], [{"subset": [2, 1], "coeff": [1, 0]}], [{"subset": [1, 2], "coeff": 1}], []]})");
  const FormMatrix m = form_matrix_from_json(f);
  CHECK(m.is_antisymmetric());
  CHECK(m(0, 1).coefficient(0b11) == Complex(-1.0));
  CHECK(form_matrix_from_json(form_matrix_to_json(m)) == m);
  CHECK(code_of([] { form_matrix_from_json(parse_json_text(R"({"dim2n": 4, "size": 2, "entries": []})")); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("records") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "null");
  const Record r = {{"u", 0.5}, {"n", 3LL}, {"ok", true}, {"name", std::string("x")}};
  const Json back = parse_json_text(record_to_json(r));
  CHECK(back["u"] == 0.5);
  CHECK(back["n"] == 3);
  CHECK(back["ok"] == true);
  CHECK(back["name"] == "x");

  std::ostringstream csv;
  write_csv(csv, {r, {{"u", 1.0}, {"n", 4LL}, {"ok", false}, {"name", std::string("y")}}});
  CHECK(csv.str() == "u,n,ok\n0.5,3,1\n1,4,0\n");
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_json_text("{not json"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_json_file("/nonexistent/file.json"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { algebra_from_json(parse_json_text("[1, 2]")); }) == ErrorCode::ParseError);
}
