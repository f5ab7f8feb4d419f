#include "fkt/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>

#include "fkt/error.hpp"

namespace fkt {

namespace {

// Kronrod nodes on [0, 1] (symmetric), odd indices are the Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    k += kKronrodWeights[j] * sum;
    if (j % 2 == 1) g += kGaussWeights[j / 2] * sum;
  }
  return {k * half, g * half};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth, int max_depth,
           QuadratureResult& acc) {
  const Panel p = gk15(f, a, b);
  const double err = std::abs(p.kronrod - p.gauss);
  if (err <= tol || (b - a) <= 1e-14 * std::max(1.0, std::abs(a))) {
    acc.value += p.kronrod;
    acc.est_error += err;
    ++acc.panels;
    return;
  }
  if (depth >= max_depth)
    throw Error(ErrorCode::QuadratureNotConverged,
                "bisection depth " + std::to_string(max_depth) + " reached on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]");
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
  adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace

QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                               int max_depth) {
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "abs_tol must be positive");
  QuadratureResult r;
  if (a == b) return r;
  adapt(f, a, b, abs_tol, 0, max_depth, r);
  if (!std::isfinite(r.value)) throw Error(ErrorCode::QuadratureNotConverged, "non-finite integrand");
  return r;
}

}  // namespace fkt
