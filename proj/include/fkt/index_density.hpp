#pragma once

// Exterior algebra on 2n generators e_1 .. e_2n with complex coefficients,
// matrices of even forms, and the characteristic forms built from them:
// A-hat, the Chern character, the Mehler kernel of the model harmonic
// oscillator and the adiabatic index density.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace fkt {

using Blade = std::uint32_t;  // bit j set <=> e_{j+1} present

class FormElement {
 public:
  static constexpr int kMaxGenerators = 24;

  explicit FormElement(int dim2n = 0);
  static FormElement scalar(int dim2n, std::complex<double> c);
  /// Single term c * e_{i1} ^ ... ^ e_{ik}; 1-based indices in any order (sign applied).
  static FormElement term(int dim2n, std::span<const int> generators, std::complex<double> c = 1.0);
  static FormElement generator(int dim2n, int index);

  int dim2n() const { return dim2n_; }
  const std::map<Blade, std::complex<double>>& terms() const { return terms_; }

  std::complex<double> coefficient(Blade blade) const;
  std::complex<double> scalar_part() const { return coefficient(0); }
  bool is_zero() const { return terms_.empty(); }
  bool is_even() const;
  /// Largest degree with a nonzero term, -1 for the zero form.
  int max_degree() const;
  /// Same form without its degree-0 part.
  FormElement nilpotent_part() const;
  FormElement degree_part(int k) const;

  FormElement operator+(const FormElement& rhs) const;
  FormElement operator-(const FormElement& rhs) const;
  FormElement operator*(std::complex<double> s) const;
  FormElement& operator+=(const FormElement& rhs);

  bool operator==(const FormElement&) const = default;

  void add_term(Blade blade, std::complex<double> c);

 private:
  int dim2n_;
  std::map<Blade, std::complex<double>> terms_;  // zero coefficients are never stored
};

/// Graded-commutative product, truncated at degree 2n automatically.
FormElement wedge(const FormElement& a, const FormElement& b);

/// Coefficient of e_1 ^ ... ^ e_2n.
std::complex<double> top_coefficient(const FormElement& x);

/// exp of an even form: e^{scalar part} times the terminating series in the nilpotent part.
FormElement form_exp(const FormElement& x);

/// Square matrix whose entries are even forms (these commute with each other).
class FormMatrix {
 public:
  FormMatrix(int dim2n, int size);
  static FormMatrix identity(int dim2n, int size);

  int dim2n() const { return dim2n_; }
  int size() const { return size_; }
  const FormElement& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * size_ + j)]; }
  FormElement& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * size_ + j)]; }

  bool is_antisymmetric(double tol = 0.0) const;
  bool is_symmetric(double tol = 0.0) const;
  bool entries_even() const;
  /// True when no entry has a degree-0 part.
  bool is_nilpotent() const;

  FormMatrix operator+(const FormMatrix& rhs) const;
  FormMatrix operator-(const FormMatrix& rhs) const;
  FormMatrix operator*(const FormMatrix& rhs) const;
  FormMatrix operator*(std::complex<double> s) const;
  FormElement trace() const;
  FormMatrix transpose() const;
  FormMatrix direct_sum(const FormMatrix& other) const;

  bool operator==(const FormMatrix&) const = default;

 private:
  int dim2n_;
  int size_;
  std::vector<FormElement> entries_;
};

/// Matrix exponential. Nilpotent input uses the terminating series; otherwise
/// scaling and squaring with a Taylor core.
FormMatrix matrix_exp(const FormMatrix& x);

/// A-hat(rD) = exp(1/2 tr log((rD/2) / sinh(rD/2))), D antisymmetric with nilpotent entries.
/// `max_order` caps the power of D used; the default takes every power that
/// can contribute before nilpotency kills the terms.
FormElement a_hat(const FormMatrix& d, double r = 1.0, int max_order = -1);

/// ch(rL) = tr exp(rL).
FormElement chern_char(const FormMatrix& l, double r = 1.0);

struct AdiabaticDensity {
  std::complex<double> value;   // z (2/i)^{m/2} (4 pi r)^{-m/2} [A-hat(rD) ch(rL)]^max
  std::complex<double> limit;   // same with the r-scaling removed: z (2/i)^{m/2} (4 pi)^{-m/2} [A-hat(D) ch(L)]^max
  std::complex<double> top;     // [A-hat(rD) ch(rL)]^max
  std::complex<double> prefactor;
};

/// m = dim2n is the real dimension; it is even, so (2/i)^{m/2} is an integer power.
AdiabaticDensity adiabatic_density(const FormMatrix& d, const FormMatrix& l, double z_trace, double r);

/// e^{-J_0}(x, 0) = (4 pi r)^{-m/2} A-hat(rD) e^{x^t C x / 8}
///                   exp(rL - (1/4r) x^t ((rD/2) / tanh(rD/2)) x),   m = len(x) = size(D).
/// Matrix valued (size of L); D antisymmetric, C symmetric.
FormMatrix mehler_kernel(const FormMatrix& d, const FormMatrix& c_sym, const FormMatrix& l,
                         std::span<const double> x, double r);

/// x^t M x for a matrix of forms.
FormElement quadratic_form(const FormMatrix& m, std::span<const double> x);

}  // namespace fkt
