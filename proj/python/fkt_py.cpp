#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "fkt/error.hpp"
#include "fkt/hyperbolic_zeta.hpp"
#include "fkt/serialization.hpp"
#include "fkt/zeta_torsion.hpp"

namespace py = pybind11;
using namespace fkt;

namespace {

Module module_of(const std::vector<std::pair<int, double>>& factors, const std::vector<Matrix>& blocks) {
  std::vector<Factor> fs;
  for (const auto& [n, w] : factors) fs.push_back({n, w});
  std::vector<int> mults;
  for (const auto& b : blocks) mults.push_back(static_cast<int>(b.rows()));
  return Module(Algebra::make(fs), mults);
}

py::dict torsion_dict(const std::string& instance, double u) {
  const ComplexInstance ci = complex_from_json(parse_json_text(instance));
  const TorsionElement t = torsion(ci.complex, ci.metric, u);
  py::dict d;
  d["u"] = u;
  d["scalar"] = t.scalar;
  d["zeta_prime0"] = graded_zeta_prime0(ci.complex, ci.metric, u);
  d["rho_prime_coeff"] = t.rho_prime.coefficient();
  d["torsion_coeff"] = t.coefficient();
  d["anomaly"] = anomaly_c(ci.complex, ci.metric, u);
  std::vector<double> b;
  for (int q = 0; q <= ci.complex.top_degree(); ++q) b.push_back(betti(ci.complex, ci.metric, q, u));
  d["betti"] = b;
  return d;
}

py::dict variation_dict(const std::string& instance, double u, double h) {
  const ComplexInstance ci = complex_from_json(parse_json_text(instance));
  const VariationCheck v = variation_check(ci.complex, ci.metric, u, h);
  py::dict d;
  d["lhs"] = v.lhs;
  d["anomaly"] = v.anomaly;
  d["rhs"] = v.rhs;
  d["gap"] = v.gap;
  d["zeta_gap"] = v.zeta_gap;
  d["rho_prime_gap"] = v.rho_prime_gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fkt, m) {
  m.doc() = "Fuglede-Kadison determinants and L2 torsion of finite complexes";

  py::register_exception<Error>(m, "FktError");

  m.def(
      "fk_determinant",
      [](const std::vector<std::pair<int, double>>& factors, const std::vector<Matrix>& blocks) {
        const Module mod = module_of(factors, blocks);
        return fk_determinant_abs(CommutantOp(mod, mod, blocks));
      },
      py::arg("factors"), py::arg("blocks"),
      "Det_tau|T| of the operator with one square block per factor; factors are (size, weight) pairs.");

  m.def(
      "canonical_trace",
      [](const std::vector<std::pair<int, double>>& factors, const std::vector<Matrix>& blocks) {
        const Module mod = module_of(factors, blocks);
        return canonical_trace(CommutantOp(mod, mod, blocks));
      },
      py::arg("factors"), py::arg("blocks"));

  m.def("torsion", &torsion_dict, py::arg("instance"), py::arg("u") = 0.0,
        "Torsion data of a complex given as a JSON instance.");
  m.def("variation", &variation_dict, py::arg("instance"), py::arg("u") = 0.0, py::arg("h") = 1e-4);
  m.def(
      "validate",
      [](const std::string& instance) {
        const ComplexInstance ci = complex_from_json(parse_json_text(instance));
        return validate_complex(ci.complex).valid;
      },
      py::arg("instance"));

  m.def(
      "randol_zeta", [](double s, int genus) { return randol_zeta(s, genus).value; }, py::arg("s"), py::arg("genus"));
  m.def(
      "randol_zeta_prime0", [](int genus) { return randol_zeta_prime0(genus).value; }, py::arg("genus"));
  m.def("torsion_constant_C", [] { return torsion_constant_C().value; });
  m.def(
      "surface_torsion_scalar", [](int genus, int p) { return surface_torsion_scalar(genus, p); }, py::arg("genus"),
      py::arg("p"));
}
