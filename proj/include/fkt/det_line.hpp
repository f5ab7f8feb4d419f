#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fkt/vn_core.hpp"

namespace fkt {

/// Point of det(M) written as coeff * <,>_base, where <,>_base is the standard
/// inner product of the defining representation. det(0) = R with base 1.
struct DetLineElement {
  Module module;
  double coeff = 1.0;

  int orientation() const { return coeff > 0 ? 1 : (coeff < 0 ? -1 : 0); }
};

/// Element of prod_q det(H^q)^{(-1)^q}: one ungraded element per degree and an
/// overall scale. The graded coefficient is scale * prod_q coeff_q^{(-1)^q}.
struct GradedDetLine {
  std::vector<DetLineElement> lines;
  double scale = 1.0;

  double coefficient() const;
  /// coeff_q^{(-1)^q}, the contribution of degree q to coefficient().
  double graded_factor(std::size_t q) const;
  /// Base element of the graded line over the given modules.
  static GradedDetLine base(const std::vector<Module>& modules);
};

/// Element of det(M) for the metric <v, w> = <A v, w>_base: coeff = Det_tau(A)^{-1/2}.
DetLineElement metric_element(const CommutantOp& a, const SpectralTolerances& tol = {});

DetLineElement base_element(const Module& m);

/// det(M) (x) det(N) -> det(M (+) N).
DetLineElement direct_sum(const DetLineElement& e1, const DetLineElement& e2);

/// f_*: det(M) -> det(N) for an isomorphism f: M -> N. Multiplies by Det_tau(|f|).
DetLineElement induced_map(const CommutantOp& f, const DetLineElement& e, const SpectralTolerances& tol = {});

/// det(M') (x) det(M'') -> det(M) for 0 -> M' -a-> M -b-> M'' -> 0.
///
/// `section` is a right inverse of b (b * section = 1). Without one, the
/// orthogonal complement of im(a) is used. The result does not depend on the
/// section; tests exercise that.
DetLineElement exact_sequence_iso(const DetLineElement& e1, const DetLineElement& e2, const CommutantOp& alpha,
                                  const CommutantOp& beta, const std::optional<CommutantOp>& section = std::nullopt,
                                  double exact_tol = 1e-10);

/// Relator word: (generator index, exponent +-1) pairs.
using Word = std::vector<std::pair<int, int>>;

struct Holonomy {
  std::vector<double> generator_values;
  bool consistent = true;
  double max_relator_error = 0.0;
};

/// gamma_j -> Det_tau(|rho(gamma_j)|), checked against the relators.
Holonomy rep_holonomy(const std::vector<CommutantOp>& generators, const std::vector<Word>& relators,
                      double rel_tol = 1e-9);

/// Evaluate a word in the positive-real value homomorphism.
double evaluate_word(const std::vector<double>& values, const Word& word);

/// Flat R^+ bundles are isomorphic iff their holonomies agree.
bool bundle_iso_exists(const Holonomy& h1, const Holonomy& h2, double rel_tol = 1e-9);

}  // namespace fkt
