#include "fkt/hyperbolic_zeta.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fkt/error.hpp"

namespace fkt {

namespace {

constexpr double kPi = std::numbers::pi;

double sech2(double x) {
  // sech^2 x = 4 e^{-2x} / (1 + e^{-2x})^2, stable for large x
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

void check_spec(const QuadratureSpec& spec) {
  if (!(spec.r_max > 0.0) || !(spec.abs_tol > 0.0) || spec.max_refinements < 1)
    throw Error(ErrorCode::InvalidArgument, "quadrature settings need r_max > 0, abs_tol > 0, max_refinements >= 1");
}

void check_genus(int genus) {
  if (genus < 1) throw Error(ErrorCode::DomainError, "genus must be >= 1");
}

/// Integrate over [0, r_max] as unit panels summed in order. Panel k gets the
/// tolerance abs_tol * 2^-(k+2) (floored), so the split of [0, R] does not
/// depend on r_max and a larger cut-off only appends panels.
QuadratureResult panel_integral(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  const int whole = static_cast<int>(std::floor(spec.r_max));
  const double frac = spec.r_max - whole;
  const int pieces = whole + (frac > 0.0 ? 1 : 0);
  QuadratureResult total;
  for (int k = 0; k < pieces; ++k) {
    const double b = std::min(static_cast<double>(k + 1), spec.r_max);
    const double panel_tol = spec.abs_tol * std::ldexp(1.0, -std::min(k + 2, 24));
    const auto piece = gauss_kronrod(f, k, b, panel_tol, spec.max_refinements);
    total.value += piece.value;
    total.est_error += piece.est_error;
    total.panels += piece.panels;
  }
  return total;
}

}  // namespace

double zeta_prime_tail_bound(double r_max) {
  // |g(r)| <= (1/4 + r^2)(1 + |log(1/4 + r^2)|) and sech^2(pi r) <= 4 e^{-2 pi r}; the
  // polynomial-log factor grows at logarithmic rate <= 4/r, hence the reduced decay rate.
  const double rate = 2.0 * kPi - 4.0 / r_max;
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  const double x = 0.25 + r_max * r_max;
  return 4.0 * x * (1.0 + std::abs(std::log(x))) * std::exp(-2.0 * kPi * r_max) / rate;
}

double zeta_tail_bound(double s, double r_max) {
  const double a = 1.0 - s;
  const double rate = 2.0 * kPi - 2.0 * std::max(a, 0.0) / r_max;
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 4.0 * std::pow(0.25 + r_max * r_max, a) * std::exp(-2.0 * kPi * r_max) / rate;
}

QuadratureResult randol_zeta(double s, int genus, const QuadratureSpec& spec) {
  check_spec(spec);
  check_genus(genus);
  if (!(s < 1.0)) throw Error(ErrorCode::DomainError, "the continuation formula holds for s < 1");
  if (genus == 1) return {};
  QuadratureSpec used = spec;
  // Grow the cut-off until the analytic tail is negligible; matters only for very negative s.
  while (!(zeta_tail_bound(s, used.r_max) < used.abs_tol / 10.0)) {
    used.r_max *= 2.0;
    if (used.r_max > 1e4) throw Error(ErrorCode::QuadratureNotConverged, "tail bound does not fall below tolerance");
  }
  const double a = 1.0 - s;
  const auto integral =
      panel_integral([a](double r) { return std::pow(0.25 + r * r, a) * sech2(kPi * r); }, used);
  const double factor = (genus - 1) * kPi / (s - 1.0);
  QuadratureResult out;
  out.value = factor * integral.value;
  out.est_error = std::abs(factor) * (integral.est_error + zeta_tail_bound(s, used.r_max));
  out.panels = integral.panels;
  return out;
}

QuadratureResult randol_zeta_prime0(int genus, const QuadratureSpec& spec) {
  check_spec(spec);
  check_genus(genus);
  if (genus == 1) return {};
  if (!(zeta_prime_tail_bound(spec.r_max) < spec.abs_tol / 10.0))
    throw Error(ErrorCode::QuadratureNotConverged, "r_max too small for the requested tolerance");
  const auto integral = panel_integral(
      [](double r) {
        const double x = 0.25 + r * r;
        return x * sech2(kPi * r) * (std::log(x) - 1.0);
      },
      spec);
  // pi * I is formed first so that the result is exactly linear in g - 1.
  const double unit = kPi * integral.value;
  QuadratureResult out;
  out.value = (genus - 1) * unit;
  out.est_error = (genus - 1) * kPi * (integral.est_error + zeta_prime_tail_bound(spec.r_max));
  out.panels = integral.panels;
  return out;
}

QuadratureResult torsion_constant_C(const QuadratureSpec& spec) {
  QuadratureResult r = randol_zeta_prime0(2, spec);
  r.value *= 0.5;
  r.est_error *= 0.5;
  return r;
}

double surface_torsion_scalar(int genus, int p, const QuadratureSpec& spec) {
  if (genus < 2) throw Error(ErrorCode::DomainError, "surface torsion needs genus >= 2");
  if (p != 0 && p != 1) throw Error(ErrorCode::DomainError, "p must be 0 or 1");
  const double c = torsion_constant_C(spec).value;
  return std::exp((p == 0 ? 1.0 : -1.0) * c * (genus - 1));
}

double symmetric_space_scaling(double c_p, double vol_or_chi) { return std::exp(c_p * vol_or_chi); }

}  // namespace fkt
