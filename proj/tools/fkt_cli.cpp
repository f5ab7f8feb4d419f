// fkt: command-line front end. Reads JSON instances, runs one computation per
// evaluation point and writes JSON (one object, or JSON lines for sweeps) or CSV.
//
// Exit status: 0 ok, 2 invalid input or failed validation, 3 numerical non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fkt/det_line.hpp"
#include "fkt/error.hpp"
#include "fkt/hilbert_complex.hpp"
#include "fkt/hyperbolic_zeta.hpp"
#include "fkt/index_density.hpp"
#include "fkt/random_instances.hpp"
#include "fkt/serialization.hpp"
#include "fkt/vn_core.hpp"
#include "fkt/zeta_torsion.hpp"

namespace {

using namespace fkt;

struct RunConfig {
  std::string input_path;
  std::string output_path;
  std::string format = "json";
  double u_min = 0.0;
  double u_max = 0.0;
  int steps = 1;
  double h = 1e-4;
  SpectralTolerances spectral;
  QuadratureSpec quad;

  // randol
  int genus = 2;
  std::string what = "C";
  double s = 0.0;
  int p = 0;

  // generate
  std::string kind = "complex";
  int degrees = 3;
  int max_block = 6;
  int factors = 2;
  double scale = 0.5;
  bool traceless = false;
};

struct Output {
  std::vector<Record> records;
  bool sweep = false;
  int status = 0;
};

std::vector<double> sweep_points(const RunConfig& cfg) {
  if (cfg.steps < 1) throw Error(ErrorCode::InvalidArgument, "--steps must be >= 1");
  if (cfg.steps == 1) return {cfg.u_min};
  std::vector<double> u;
  for (int k = 0; k < cfg.steps; ++k)
    u.push_back(k + 1 == cfg.steps ? cfg.u_max : cfg.u_min + (cfg.u_max - cfg.u_min) * k / (cfg.steps - 1));
  return u;
}

Json load(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw Error(ErrorCode::ParseError, "--in is required for this command");
  return parse_json_file(cfg.input_path);
}

Output run_fkdet(const RunConfig& cfg) {
  const CommutantOp a = op_from_json(load(cfg));
  Record r;
  if (a.is_endomorphism() && a.is_self_adjoint(cfg.spectral.self_adjoint)) {
    const auto d = fk_determinant(a, cfg.spectral);
    r = {{"det", d.value}, {"log_det", d.log_value}, {"kernel_dim", d.kernel_dim}};
  } else {
    const double d = fk_determinant_abs(a, cfg.spectral);
    r = {{"det", d}, {"log_det", std::log(d)}, {"kernel_dim", 0.0}};
  }
  r.emplace_back("trace_re", canonical_trace(a).real());
  r.emplace_back("trace_im", canonical_trace(a).imag());
  return {{r}};
}

Output run_detline(const RunConfig& cfg) {
  const Json j = load(cfg);
  if (!j.contains("metric")) throw Error(ErrorCode::ParseError, "detline input needs a \"metric\" operator");
  const DetLineElement e = metric_element(op_from_json(j.at("metric")), cfg.spectral);
  Record r = {{"coeff", e.coeff}, {"orientation", static_cast<long long>(e.orientation())},
              {"dim_tau", e.module.dim_tau()}};
  if (j.contains("map")) {
    const DetLineElement f = induced_map(op_from_json(j.at("map")), e, cfg.spectral);
    r.emplace_back("mapped_coeff", f.coeff);
  }
  return {{r}};
}

Output run_validate(const RunConfig& cfg) {
  const ComplexInstance inst = complex_from_json(load(cfg));
  const ComplexReport rep = validate_complex(inst.complex, cfg.spectral.kernel_rel);
  Record r = {{"valid", rep.valid},
              {"max_violation", rep.max_violation},
              {"euler_characteristic", inst.complex.euler_characteristic_tau()}};
  if (rep.valid)
    for (int q = 0; q <= inst.complex.top_degree(); ++q)
      r.emplace_back("betti_" + std::to_string(q), betti(inst.complex, inst.metric, q, 0.0, cfg.spectral));
  std::string problems;
  for (const auto& p : rep.problems) problems += (problems.empty() ? "" : "; ") + p;
  r.emplace_back("problems", problems);
  return {{r}, false, rep.valid ? 0 : 2};
}

Output run_torsion(const RunConfig& cfg) {
  const ComplexInstance inst = complex_from_json(load(cfg));
  Output out;
  out.sweep = cfg.steps > 1;
  for (double u : sweep_points(cfg)) {
    const TorsionElement t = torsion(inst.complex, inst.metric, u, cfg.spectral);
    const RhoPrime rp = rho_prime(inst.complex, inst.metric, u, cfg.spectral);
    out.records.push_back({{"u", u},
                           {"zeta_prime0", t.zeta_prime0},
                           {"torsion_coeff", t.coefficient()},
                           {"rho_prime_coeff", t.rho_prime.coefficient()},
                           {"anomaly", anomaly_c(inst.complex, inst.metric, u)},
                           {"max_condition", rp.max_condition},
                           {"ill_conditioned", rp.ill_conditioned}});
  }
  return out;
}

Output run_vary(const RunConfig& cfg) {
  const ComplexInstance inst = complex_from_json(load(cfg));
  Output out;
  out.sweep = cfg.steps > 1;
  for (double u : sweep_points(cfg)) {
    const TorsionElement t = torsion(inst.complex, inst.metric, u, cfg.spectral);
    const VariationCheck v = variation_check(inst.complex, inst.metric, u, cfg.h, cfg.spectral);
    out.records.push_back({{"u", u},
                           {"zeta_prime0", t.zeta_prime0},
                           {"torsion_coeff", t.coefficient()},
                           {"anomaly", v.anomaly},
                           {"lhs", v.lhs},
                           {"rhs", v.rhs},
                           {"gap", v.gap},
                           {"zeta_gap", v.zeta_gap},
                           {"rho_prime_gap", v.rho_prime_gap}});
  }
  return out;
}

Output run_relative(const RunConfig& cfg) {
  const Json j = load(cfg);
  if (!j.contains("E") || !j.contains("F")) throw Error(ErrorCode::ParseError, "relative input needs \"E\" and \"F\"");
  const ComplexInstance e = complex_from_json(j.at("E"));
  const ComplexInstance f = complex_from_json(j.at("F"));
  Output out;
  out.sweep = cfg.steps > 1;
  for (double u : sweep_points(cfg)) {
    const RelativeTorsion rt = relative_torsion(e.complex, f.complex, e.metric, f.metric, u, cfg.spectral);
    out.records.push_back({{"u", u},
                           {"ratio", rt.ratio},
                           {"torsion_e", rt.e.coefficient()},
                           {"torsion_f", rt.f.coefficient()},
                           {"anomaly_e", anomaly_c(e.complex, e.metric, u)},
                           {"anomaly_f", anomaly_c(f.complex, f.metric, u)}});
  }
  return out;
}

Output run_holonomy(const RunConfig& cfg) {
  const Json j = load(cfg);
  const HolonomyInstance h = holonomy_from_json(j);
  const Holonomy hol = rep_holonomy(h.generators, h.relators);
  Record r = {{"consistent", hol.consistent}, {"max_relator_error", hol.max_relator_error}};
  for (std::size_t k = 0; k < hol.generator_values.size(); ++k)
    r.emplace_back("value_" + std::to_string(k + 1), hol.generator_values[k]);
  if (j.contains("compare")) {
    const HolonomyInstance other = holonomy_from_json(j.at("compare"));
    r.emplace_back("isomorphic", bundle_iso_exists(hol, rep_holonomy(other.generators, other.relators)));
  }
  return {{r}};
}

Output run_randol(const RunConfig& cfg) {
  QuadratureResult q;
  if (cfg.what == "zeta") {
    q = randol_zeta(cfg.s, cfg.genus, cfg.quad);
  } else if (cfg.what == "zeta-prime") {
    q = randol_zeta_prime0(cfg.genus, cfg.quad);
  } else if (cfg.what == "C") {
    q = torsion_constant_C(cfg.quad);
  } else {
    const double v = surface_torsion_scalar(cfg.genus, cfg.p, cfg.quad);
    const auto c = torsion_constant_C(cfg.quad);
    q.value = v;
    q.est_error = v * std::abs(cfg.genus - 1) * c.est_error;
    q.panels = c.panels;
  }
  return {{{{"value", q.value}, {"est_error", q.est_error}, {"panels", static_cast<long long>(q.panels)}}}};
}

Output run_density(const RunConfig& cfg) {
  const Json j = load(cfg);
  if (!j.contains("D") || !j.contains("L")) throw Error(ErrorCode::ParseError, "density input needs \"D\" and \"L\"");
  const FormMatrix d = form_matrix_from_json(j.at("D"));
  const FormMatrix l = form_matrix_from_json(j.at("L"));
  const double z = j.value("z_trace", 1.0);
  const double r = j.value("r", 1.0);
  const AdiabaticDensity a = adiabatic_density(d, l, z, r);
  Record rec = {{"value_re", a.value.real()}, {"value_im", a.value.imag()}, {"limit_re", a.limit.real()},
                {"limit_im", a.limit.imag()},  {"top_re", a.top.real()},     {"top_im", a.top.imag()}};
  if (j.contains("x")) {
    const auto x = j.at("x").get<std::vector<double>>();
    const FormMatrix c = j.contains("C") ? form_matrix_from_json(j.at("C")) : FormMatrix(d.dim2n(), d.size());
    rec.emplace_back("mehler", form_matrix_to_json(mehler_kernel(d, c, l, x, r)));
  }
  return {{rec}};
}

Output run_generate(const RunConfig& cfg) {
  Rng rng = Rng::from_env();
  const Algebra a = random_algebra(rng, cfg.factors, 3);
  Json inst;
  if (cfg.kind == "complex") {
    const FiniteComplex c = random_complex(rng, a, {cfg.degrees, cfg.max_block, 2});
    inst = complex_to_json(c, random_exp_family(rng, c, cfg.scale, cfg.traceless));
  } else if (cfg.kind == "positive") {
    inst = op_to_json(random_positive(rng, random_module(rng, a), 1.0));
  } else if (cfg.kind == "invertible") {
    inst = op_to_json(random_invertible(rng, random_module(rng, a)));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --kind " + cfg.kind);
  }
  return {{{{"instance", inst}}}};
}

void emit(const RunConfig& cfg, const Output& out) {
  std::ofstream file;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write " + cfg.output_path);
  }
  std::ostream& os = cfg.output_path.empty() ? std::cout : file;
  if (cfg.format == "csv") {
    write_csv(os, out.records);
    return;
  }
  // generate writes the bare instance so that it feeds straight back into --in
  if (out.records.size() == 1 && out.records.front().size() == 1 && out.records.front().front().first == "instance") {
    os << std::get<Json>(out.records.front().front().second).dump(2) << '\n';
    return;
  }
  for (const auto& r : out.records) os << record_to_json(r) << '\n';
}

void add_io(CLI::App* sub, RunConfig& cfg, bool needs_input) {
  if (needs_input) sub->add_option("--in", cfg.input_path, "input JSON instance")->required();
  sub->add_option("--out", cfg.output_path, "output path (default stdout)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tol-kernel", cfg.spectral.kernel_rel, "relative kernel threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_sweep(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--u-min", cfg.u_min, "first metric parameter")->capture_default_str();
  sub->add_option("--u-max", cfg.u_max, "last metric parameter")->capture_default_str();
  sub->add_option("--steps", cfg.steps, "number of sweep points")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuglede-Kadison determinants, L2 torsion of finite complexes and related invariants"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* fkdet = app.add_subcommand("fkdet", "Det_tau of an operator (Det_tau|T| when not self-adjoint)");
  add_io(fkdet, cfg, true);
  auto* detline = app.add_subcommand("detline", "determinant-line element of a metric, optionally pushed along a map");
  add_io(detline, cfg, true);
  auto* validate = app.add_subcommand("complex-validate", "check d^2 = 0 and report Betti numbers");
  add_io(validate, cfg, true);
  auto* tors = app.add_subcommand("torsion", "torsion element along a metric sweep");
  add_io(tors, cfg, true);
  add_sweep(tors, cfg);
  auto* vary = app.add_subcommand("vary", "finite-difference check of the metric variation formulas");
  add_io(vary, cfg, true);
  add_sweep(vary, cfg);
  vary->add_option("--step", cfg.h, "difference step in (0, 1e-2]")->capture_default_str();
  auto* relative = app.add_subcommand("relative", "relative torsion of two complexes along a sweep");
  add_io(relative, cfg, true);
  add_sweep(relative, cfg);
  auto* holonomy = app.add_subcommand("holonomy", "determinant-line-bundle holonomy of a representation");
  add_io(holonomy, cfg, true);
  auto* randol = app.add_subcommand("randol", "zeta data of a compact hyperbolic surface");
  add_io(randol, cfg, false);
  randol->add_option("--genus", cfg.genus, "genus g >= 1")->capture_default_str();
  randol->add_option("--what", cfg.what, "zeta, zeta-prime, C or torsion")
      ->check(CLI::IsMember({"zeta", "zeta-prime", "C", "torsion"}))
      ->capture_default_str();
  randol->add_option("--s", cfg.s, "argument of zeta, s < 1")->capture_default_str();
  randol->add_option("--p", cfg.p, "form degree for --what torsion (0 or 1)")->capture_default_str();
  randol->add_option("--rmax", cfg.quad.r_max, "integration cut-off")->check(CLI::PositiveNumber)->capture_default_str();
  randol->add_option("--tol,--tol-quad", cfg.quad.abs_tol, "absolute quadrature tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* density = app.add_subcommand("density", "adiabatic index density and Mehler kernel");
  add_io(density, cfg, true);
  auto* generate = app.add_subcommand("generate", "random instance seeded by FKT_SEED");
  generate->add_option("--out", cfg.output_path, "output path (default stdout)");
  generate->add_option("--kind", cfg.kind, "complex, positive or invertible")
      ->check(CLI::IsMember({"complex", "positive", "invertible"}))
      ->capture_default_str();
  generate->add_option("--degrees", cfg.degrees, "number of degrees")->check(CLI::Range(1, 5))->capture_default_str();
  generate->add_option("--max-block", cfg.max_block, "largest block size")->check(CLI::Range(1, 8))->capture_default_str();
  generate->add_option("--factors", cfg.factors, "largest number of factors")->check(CLI::Range(1, 4))->capture_default_str();
  generate->add_option("--scale", cfg.scale, "size of the metric generators")->capture_default_str();
  generate->add_flag("--traceless", cfg.traceless, "tau-traceless metric generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Output out;
    if (*fkdet) out = run_fkdet(cfg);
    else if (*detline) out = run_detline(cfg);
    else if (*validate) out = run_validate(cfg);
    else if (*tors) out = run_torsion(cfg);
    else if (*vary) out = run_vary(cfg);
    else if (*relative) out = run_relative(cfg);
    else if (*holonomy) out = run_holonomy(cfg);
    else if (*randol) out = run_randol(cfg);
    else if (*density) out = run_density(cfg);
    else out = run_generate(cfg);
    emit(cfg, out);
    return out.status;
  } catch (const Error& e) {
    std::cerr << "fkt: " << e.what() << '\n';
    return e.is_convergence_failure() ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "fkt: ParseError: " << e.what() << '\n';
    return 2;
  }
}
