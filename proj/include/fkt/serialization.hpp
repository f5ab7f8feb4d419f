#pragma once

// JSON instances for algebras, operators, complexes, holonomy data and form
// matrices, plus the flat result records written by the command-line tool.
// Complex numbers are [re, im] pairs; a bare number is read as a real entry.
// Blocks are flattened row-major, one list per factor.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fkt/det_line.hpp"
#include "fkt/hilbert_complex.hpp"
#include "fkt/index_density.hpp"

namespace fkt {

using Json = nlohmann::json;

Json parse_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

Algebra algebra_from_json(const Json& j);
Json algebra_to_json(const Algebra& a);

Module module_from_json(const Json& j);  // {"factors", "mults"}
Json module_to_json(const Module& m);

/// {"factors", "mults", "blocks", optional "codomain_mults"}.
CommutantOp op_from_json(const Json& j);
Json op_to_json(const CommutantOp& op);
/// Blocks alone, with the shapes fixed by the given modules.
CommutantOp op_from_blocks(const Json& blocks, const Module& domain, const Module& codomain);
Json blocks_to_json(const CommutantOp& op);

struct ComplexInstance {
  FiniteComplex complex;
  MetricFamily metric;
};

/// {"algebra", "degrees", "diffs", "metric"}; metric types "exp" (generators),
/// "conformal" (rate) and "constant"; a missing metric means constant.
ComplexInstance complex_from_json(const Json& j);
Json complex_to_json(const FiniteComplex& c, const MetricFamily& mf);

struct HolonomyInstance {
  std::vector<CommutantOp> generators;
  std::vector<Word> relators;
};

HolonomyInstance holonomy_from_json(const Json& j);
Json holonomy_to_json(const HolonomyInstance& h);

/// {"dim2n", "size", "entries"}: entries is the row-major list of size^2
/// entries, each a list of {"subset": [1-based generators], "coeff": [re, im]}.
FormMatrix form_matrix_from_json(const Json& j);
Json form_matrix_to_json(const FormMatrix& m);
Json form_to_json(const FormElement& f);

/// One output row: ordered (name, value) pairs.
/// Nested Json values are written as-is in JSON output and skipped in CSV.
using RecordValue = std::variant<double, long long, bool, std::string, Json>;
using Record = std::vector<std::pair<std::string, RecordValue>>;

/// Doubles use 17 significant digits; non-finite values become null.
std::string format_double(double x);
std::string record_to_json(const Record& r);
/// Header from the first record's numeric and boolean fields, then one line per record.
void write_csv(std::ostream& out, const std::vector<Record>& records);

}  // namespace fkt
