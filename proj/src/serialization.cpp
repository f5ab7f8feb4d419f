#include "fkt/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fkt/error.hpp"

namespace fkt {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_error(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

Complex number_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  parse_error("complex numbers are [re, im] pairs or plain numbers");
}

Json number_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

std::vector<int> int_list(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be a list");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) parse_error(std::string(what) + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Module module_with_mults(const Algebra& a, const Json& j) { return Module(a, int_list(j, "mults")); }

Json op_list_to_json(const std::vector<CommutantOp>& ops) {
  Json arr = Json::array();
  for (const auto& op : ops) arr.push_back(blocks_to_json(op));
  return arr;
}

}  // namespace

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    parse_error(path + ": " + e.what());
  }
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(e.what());
  }
}

// --- algebra, module, operator ---------------------------------------------

Algebra algebra_from_json(const Json& j) {
  const Json& fs = field(j, "factors");
  if (!fs.is_array()) parse_error("factors must be a list of [n, w] pairs");
  std::vector<Factor> factors;
  for (const auto& f : fs) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number())
      parse_error("factors must be a list of [n, w] pairs");
    factors.push_back({f[0].get<int>(), f[1].get<double>()});
  }
  const bool normalize = j.value("normalize", false);
  return Algebra::make(std::move(factors), normalize);
}

Json algebra_to_json(const Algebra& a) {
  Json fs = Json::array();
  for (const auto& f : a.factors()) fs.push_back(Json::array({f.size, f.weight}));
  return Json{{"factors", fs}};
}

Module module_from_json(const Json& j) { return module_with_mults(algebra_from_json(j), field(j, "mults")); }

Json module_to_json(const Module& m) {
  Json j = algebra_to_json(m.algebra());
  j["mults"] = Json(std::vector<int>(m.mults().begin(), m.mults().end()));
  return j;
}

CommutantOp op_from_blocks(const Json& blocks, const Module& domain, const Module& codomain) {
  if (!blocks.is_array() || blocks.size() != domain.mults().size())
    parse_error("one block per factor is required");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int rows = codomain.mult(i);
    const int cols = domain.mult(i);
    const Json& b = blocks[i];
    if (!b.is_array() || b.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
      parse_error("block " + std::to_string(i) + " must hold " + std::to_string(rows * cols) + " entries");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = number_from_json(b[static_cast<std::size_t>(r * cols + c)]);
    out.push_back(std::move(m));
  }
  return CommutantOp(domain, codomain, std::move(out));
}

Json blocks_to_json(const CommutantOp& op) {
  Json arr = Json::array();
  for (const auto& b : op.blocks()) {
    Json flat = Json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) flat.push_back(number_to_json(b(r, c)));
    arr.push_back(std::move(flat));
  }
  return arr;
}

CommutantOp op_from_json(const Json& j) {
  const Algebra a = algebra_from_json(j);
  const Module dom = module_with_mults(a, field(j, "mults"));
  const Module cod = j.contains("codomain_mults") ? module_with_mults(a, j.at("codomain_mults")) : dom;
  return op_from_blocks(field(j, "blocks"), dom, cod);
}

Json op_to_json(const CommutantOp& op) {
  Json j = module_to_json(op.domain());
  if (!op.is_endomorphism())
    j["codomain_mults"] = Json(std::vector<int>(op.codomain().mults().begin(), op.codomain().mults().end()));
  j["blocks"] = blocks_to_json(op);
  return j;
}

// --- complexes -------------------------------------------------------------

ComplexInstance complex_from_json(const Json& j) {
  const Algebra a = algebra_from_json(field(j, "algebra"));
  const Json& deg = field(j, "degrees");
  if (!deg.is_array() || deg.empty()) parse_error("degrees must be a nonempty list of multiplicity lists");
  std::vector<Module> modules;
  for (const auto& m : deg) modules.push_back(module_with_mults(a, m));
  const Json& diffs = field(j, "diffs");
  if (!diffs.is_array() || diffs.size() + 1 != modules.size())
    parse_error("diffs must hold one entry per pair of consecutive degrees");
  std::vector<CommutantOp> d;
  for (std::size_t q = 0; q < diffs.size(); ++q) d.push_back(op_from_blocks(diffs[q], modules[q], modules[q + 1]));
  FiniteComplex c(a, modules, std::move(d), j.value("p", 0));

  if (!j.contains("metric")) return {c, MetricFamily::constant(c)};
  const Json& m = j.at("metric");
  const std::string type = field(m, "type").get<std::string>();
  if (type == "constant") return {c, MetricFamily::constant(c)};
  if (type == "conformal") return {c, MetricFamily::conformal(c, field(m, "rate").get<double>())};
  if (type == "exp") {
    const Json& gens = field(m, "generators");
    if (!gens.is_array() || gens.size() != modules.size()) parse_error("exp metric needs one generator per degree");
    std::vector<CommutantOp> g;
    for (std::size_t q = 0; q < gens.size(); ++q) g.push_back(op_from_blocks(gens[q], modules[q], modules[q]));
    return {c, MetricFamily::exponential(std::move(g))};
  }
  parse_error("unknown metric type \"" + type + "\"");
}

Json complex_to_json(const FiniteComplex& c, const MetricFamily& mf) {
  Json j;
  j["algebra"] = algebra_to_json(c.algebra);
  Json deg = Json::array();
  for (const auto& m : c.degrees) deg.push_back(std::vector<int>(m.mults().begin(), m.mults().end()));
  j["degrees"] = deg;
  j["diffs"] = op_list_to_json(c.differentials);
  if (c.p_label != 0) j["p"] = c.p_label;
  if (!mf.is_exponential()) throw Error(ErrorCode::InvalidArgument, "only exponential metric families serialize");
  j["metric"] = Json{{"type", "exp"}, {"generators", op_list_to_json(mf.generators())}};
  return j;
}

// --- holonomy --------------------------------------------------------------

HolonomyInstance holonomy_from_json(const Json& j) {
  HolonomyInstance h;
  const Json& gens = field(j, "generators");
  if (!gens.is_array()) parse_error("generators must be a list of operators");
  for (const auto& g : gens) h.generators.push_back(op_from_json(g));
  if (j.contains("relators")) {
    for (const auto& w : j.at("relators")) {
      Word word;
      if (!w.is_array()) parse_error("relators are lists of [generator, exponent] pairs");
      for (const auto& letter : w) {
        const auto pair = int_list(letter, "relator letters");
        if (pair.size() != 2) parse_error("relator letters are [generator, exponent] pairs");
        word.emplace_back(pair[0], pair[1]);
      }
      h.relators.push_back(std::move(word));
    }
  }
  return h;
}

Json holonomy_to_json(const HolonomyInstance& h) {
  Json gens = Json::array();
  for (const auto& g : h.generators) gens.push_back(op_to_json(g));
  Json rels = Json::array();
  for (const auto& w : h.relators) {
    Json word = Json::array();
    for (const auto& [g, e] : w) word.push_back(Json::array({g, e}));
    rels.push_back(std::move(word));
  }
  return Json{{"generators", gens}, {"relators", rels}};
}

// --- forms -----------------------------------------------------------------

FormMatrix form_matrix_from_json(const Json& j) {
  const int dim = field(j, "dim2n").get<int>();
  const int size = field(j, "size").get<int>();
  FormMatrix m(dim, size);
  const Json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size))
    parse_error("entries must hold size^2 term lists in row-major order");
  for (int k = 0; k < size * size; ++k) {
    FormElement e(dim);
    for (const auto& t : entries[static_cast<std::size_t>(k)]) {
      const auto subset = int_list(field(t, "subset"), "subset");
      e += FormElement::term(dim, subset, number_from_json(field(t, "coeff")));
    }
    m(k / size, k % size) = std::move(e);
  }
  return m;
}

Json form_to_json(const FormElement& f) {
  Json terms = Json::array();
  for (const auto& [blade, c] : f.terms()) {
    Json subset = Json::array();
    for (int b = 0; b < f.dim2n(); ++b)
      if (blade & (Blade{1} << b)) subset.push_back(b + 1);
    terms.push_back(Json{{"subset", subset}, {"coeff", number_to_json(c)}});
  }
  return terms;
}

Json form_matrix_to_json(const FormMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.size(); ++i)
    for (int k = 0; k < m.size(); ++k) entries.push_back(form_to_json(m(i, k)));
  return Json{{"dim2n", m.dim2n()}, {"size", m.size()}, {"entries", entries}};
}

// --- records ---------------------------------------------------------------

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string record_to_json(const Record& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : r) {
    if (!first) out += ", ";
    first = false;
    out += Json(key).dump() + ": ";
    if (const auto* d = std::get_if<double>(&value)) out += format_double(*d);
    else if (const auto* i = std::get_if<long long>(&value)) out += std::to_string(*i);
    else if (const auto* b = std::get_if<bool>(&value)) out += *b ? "true" : "false";
    else if (const auto* str = std::get_if<std::string>(&value)) out += Json(*str).dump();
    else out += std::get<Json>(value).dump();
  }
  return out + "}";
}

void write_csv(std::ostream& out, const std::vector<Record>& records) {
  if (records.empty()) return;
  std::vector<std::string> columns;
  for (const auto& [key, value] : records.front())
    if (!std::holds_alternative<std::string>(value) && !std::holds_alternative<Json>(value)) columns.push_back(key);
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) out << ',';
      for (const auto& [key, value] : r) {
        if (key != columns[k]) continue;
        if (const auto* d = std::get_if<double>(&value)) out << (std::isfinite(*d) ? format_double(*d) : "nan");
        else if (const auto* i = std::get_if<long long>(&value)) out << *i;
        else if (const auto* b = std::get_if<bool>(&value)) out << (*b ? 1 : 0);
        break;
      }
    }
    out << '\n';
  }
}

}  // namespace fkt
