#pragma once

#include <functional>

namespace fkt {

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  int panels = 0;  // accepted Gauss-Kronrod panels
};

/// Recursive adaptive 7/15-point Gauss-Kronrod on [a, b].
///
/// A panel is accepted once |K15 - G7| falls below its share of `abs_tol`
/// (proportional to its length). Bisection deeper than `max_depth` throws
/// QuadratureNotConverged.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                               int max_depth = 20);

}  // namespace fkt
