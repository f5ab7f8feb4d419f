#include "fkt/index_density.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fkt/error.hpp"

namespace fkt {

namespace {

constexpr double kPi = std::numbers::pi;

// B_0, B_2, ..., B_12: enough for 24 generators (powers of D up to 12).
constexpr std::array<double, 7> kBernoulliEven = {1.0,        1.0 / 6.0,  -1.0 / 30.0,      1.0 / 42.0,
                                                  -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_dim(int dim2n) {
  if (dim2n < 0 || dim2n > FormElement::kMaxGenerators || dim2n % 2 != 0)
    throw Error(ErrorCode::InvalidArgument,
                "dim2n must be even and at most " + std::to_string(FormElement::kMaxGenerators));
}

void same_dim(int a, int b) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, "forms over different numbers of generators");
}

int shuffle_sign(Blade a, Blade b) {
  int swaps = 0;
  for (Blade rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(static_cast<Blade>(a >> (j + 1)));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

double abs_sum(const FormElement& f) {
  double s = 0.0;
  for (const auto& [b, c] : f.terms()) s += std::abs(c);
  return s;
}

FormMatrix degree_two_part(const FormMatrix& m) {
  FormMatrix out(m.dim2n(), m.size());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out(i, j) = m(i, j).degree_part(2);
  return out;
}

}  // namespace

// --- FormElement ---------------------------------------------------------

FormElement::FormElement(int dim2n) : dim2n_(dim2n) { check_dim(dim2n); }

FormElement FormElement::scalar(int dim2n, std::complex<double> c) {
  FormElement f(dim2n);
  f.add_term(0, c);
  return f;
}

FormElement FormElement::term(int dim2n, std::span<const int> generators, std::complex<double> c) {
  FormElement f = scalar(dim2n, c);
  for (int g : generators) f = wedge(f, generator(dim2n, g));
  return f;
}

FormElement FormElement::generator(int dim2n, int index) {
  if (index < 1 || index > dim2n) throw Error(ErrorCode::InvalidArgument, "generator index out of range");
  FormElement f(dim2n);
  f.add_term(Blade{1} << (index - 1), 1.0);
  return f;
}

void FormElement::add_term(Blade blade, std::complex<double> c) {
  if (dim2n_ < 32 && (blade >> dim2n_) != 0) throw Error(ErrorCode::InvalidArgument, "blade outside the algebra");
  auto [it, inserted] = terms_.try_emplace(blade, c);
  if (!inserted) it->second += c;
  if (it->second == std::complex<double>(0.0)) terms_.erase(it);
}

std::complex<double> FormElement::coefficient(Blade blade) const {
  const auto it = terms_.find(blade);
  return it == terms_.end() ? std::complex<double>(0.0) : it->second;
}

bool FormElement::is_even() const {
  for (const auto& [b, c] : terms_)
    if (std::popcount(b) % 2 != 0) return false;
  return true;
}

int FormElement::max_degree() const {
  int d = -1;
  for (const auto& [b, c] : terms_) d = std::max(d, std::popcount(b));
  return d;
}

FormElement FormElement::nilpotent_part() const {
  FormElement f = *this;
  f.terms_.erase(0);
  return f;
}

FormElement FormElement::degree_part(int k) const {
  FormElement f(dim2n_);
  for (const auto& [b, c] : terms_)
    if (std::popcount(b) == k) f.terms_.emplace(b, c);
  return f;
}

FormElement FormElement::operator+(const FormElement& rhs) const {
  FormElement f = *this;
  f += rhs;
  return f;
}

FormElement& FormElement::operator+=(const FormElement& rhs) {
  same_dim(dim2n_, rhs.dim2n_);
  for (const auto& [b, c] : rhs.terms_) add_term(b, c);
  return *this;
}

FormElement FormElement::operator-(const FormElement& rhs) const { return *this + rhs * -1.0; }

FormElement FormElement::operator*(std::complex<double> s) const {
  FormElement f(dim2n_);
  if (s == std::complex<double>(0.0)) return f;
  for (const auto& [b, c] : terms_) f.add_term(b, c * s);
  return f;
}

FormElement wedge(const FormElement& a, const FormElement& b) {
  same_dim(a.dim2n(), b.dim2n());
  FormElement out(a.dim2n());
  for (const auto& [ba, ca] : a.terms())
    for (const auto& [bb, cb] : b.terms()) {
      if ((ba & bb) != 0) continue;
      out.add_term(ba | bb, static_cast<double>(shuffle_sign(ba, bb)) * ca * cb);
    }
  return out;
}

std::complex<double> top_coefficient(const FormElement& x) {
  if (x.dim2n() == 0) return x.scalar_part();
  const Blade top = x.dim2n() >= 32 ? ~Blade{0} : (Blade{1} << x.dim2n()) - 1;
  return x.coefficient(top);
}

FormElement form_exp(const FormElement& x) {
  const FormElement n = x.nilpotent_part();
  FormElement sum = FormElement::scalar(x.dim2n(), 1.0);
  FormElement power = FormElement::scalar(x.dim2n(), 1.0);
  for (int k = 1; k <= x.dim2n() + 1; ++k) {
    power = wedge(power, n) * (1.0 / k);
    if (power.is_zero()) break;
    sum += power;
  }
  return sum * std::exp(x.scalar_part());
}

// --- FormMatrix ----------------------------------------------------------

FormMatrix::FormMatrix(int dim2n, int size)
    : dim2n_(dim2n), size_(size), entries_(static_cast<std::size_t>(size * size), FormElement(dim2n)) {
  if (size < 0) throw Error(ErrorCode::InvalidArgument, "negative matrix size");
}

FormMatrix FormMatrix::identity(int dim2n, int size) {
  FormMatrix m(dim2n, size);
  for (int i = 0; i < size; ++i) m(i, i) = FormElement::scalar(dim2n, 1.0);
  return m;
}

bool FormMatrix::is_antisymmetric(double tol) const {
  for (int i = 0; i < size_; ++i)
    for (int j = i; j < size_; ++j)
      if (abs_sum((*this)(i, j) + (*this)(j, i)) > tol) return false;
  return true;
}

bool FormMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < size_; ++i)
    for (int j = i + 1; j < size_; ++j)
      if (abs_sum((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool FormMatrix::entries_even() const {
  for (const auto& e : entries_)
    if (!e.is_even()) return false;
  return true;
}

bool FormMatrix::is_nilpotent() const {
  for (const auto& e : entries_)
    if (e.scalar_part() != std::complex<double>(0.0)) return false;
  return true;
}

FormMatrix FormMatrix::operator+(const FormMatrix& rhs) const {
  same_dim(dim2n_, rhs.dim2n_);
  if (size_ != rhs.size_) throw Error(ErrorCode::ShapeMismatch, "form matrices of different size");
  FormMatrix out = *this;
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] += rhs.entries_[k];
  return out;
}

FormMatrix FormMatrix::operator-(const FormMatrix& rhs) const { return *this + rhs * -1.0; }

FormMatrix FormMatrix::operator*(const FormMatrix& rhs) const {
  same_dim(dim2n_, rhs.dim2n_);
  if (size_ != rhs.size_) throw Error(ErrorCode::ShapeMismatch, "form matrices of different size");
  FormMatrix out(dim2n_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) {
      FormElement acc(dim2n_);
      for (int k = 0; k < size_; ++k) acc += wedge((*this)(i, k), rhs(k, j));
      out(i, j) = std::move(acc);
    }
  return out;
}

FormMatrix FormMatrix::operator*(std::complex<double> s) const {
  FormMatrix out(dim2n_, size_);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k] * s;
  return out;
}

FormElement FormMatrix::trace() const {
  FormElement t(dim2n_);
  for (int i = 0; i < size_; ++i) t += (*this)(i, i);
  return t;
}

FormMatrix FormMatrix::transpose() const {
  FormMatrix out(dim2n_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) out(i, j) = (*this)(j, i);
  return out;
}

FormMatrix FormMatrix::direct_sum(const FormMatrix& other) const {
  same_dim(dim2n_, other.dim2n_);
  FormMatrix out(dim2n_, size_ + other.size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) out(i, j) = (*this)(i, j);
  for (int i = 0; i < other.size_; ++i)
    for (int j = 0; j < other.size_; ++j) out(size_ + i, size_ + j) = other(i, j);
  return out;
}

FormMatrix matrix_exp(const FormMatrix& x) {
  const int n = x.size();
  if (x.is_nilpotent()) {
    FormMatrix sum = FormMatrix::identity(x.dim2n(), n);
    FormMatrix power = sum;
    for (int k = 1; k <= x.dim2n() + 1; ++k) {
      power = (power * x) * (1.0 / k);
      bool zero = true;
      for (int i = 0; i < n && zero; ++i)
        for (int j = 0; j < n && zero; ++j) zero = power(i, j).is_zero();
      if (zero) break;
      sum = sum + power;
    }
    return sum;
  }
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += abs_sum(x(i, j));
    norm = std::max(norm, row);
  }
  const int squarings = norm > 0.25 ? static_cast<int>(std::ceil(std::log2(norm / 0.25))) : 0;
  const FormMatrix y = x * std::ldexp(1.0, -squarings);
  FormMatrix sum = FormMatrix::identity(x.dim2n(), n);
  FormMatrix power = sum;
  for (int k = 1; k <= 40; ++k) {
    power = (power * y) * (1.0 / k);
    sum = sum + power;
    double size = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) size = std::max(size, abs_sum(power(i, j)));
    if (size < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// --- characteristic forms ------------------------------------------------

FormElement a_hat(const FormMatrix& d, double r, int max_order) {
  if (!d.is_antisymmetric()) throw Error(ErrorCode::NotAntisymmetric, "A-hat needs an antisymmetric curvature");
  if (!d.is_nilpotent() || !d.entries_even())
    throw Error(ErrorCode::InvalidArgument, "curvature entries must be even forms without degree-0 part");
  const int dim = d.dim2n();
  if (max_order < 0) max_order = dim / 2;
  const FormMatrix x = d * (0.5 * r);
  const FormMatrix x2 = x * x;
  FormElement log_det(dim);  // tr log((X) / sinh(X)) = sum_k a_k tr X^{2k}
  FormMatrix power = x2;
  for (int k = 1; 2 * k <= max_order; ++k) {
    if (static_cast<std::size_t>(k) >= kBernoulliEven.size())
      throw Error(ErrorCode::InvalidArgument, "series order beyond the Bernoulli table");
    const double a_k = -std::ldexp(kBernoulliEven[static_cast<std::size_t>(k)], 2 * k) / (2.0 * k * factorial(2 * k));
    log_det += power.trace() * a_k;
    power = power * x2;
  }
  return form_exp(log_det * 0.5);
}

FormElement chern_char(const FormMatrix& l, double r) {
  if (!l.entries_even()) throw Error(ErrorCode::InvalidArgument, "Chern character needs even-form entries");
  return matrix_exp(l * r).trace();
}

AdiabaticDensity adiabatic_density(const FormMatrix& d, const FormMatrix& l, double z_trace, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonpositiveTime, "adiabatic density needs r > 0");
  if (d.dim2n() != l.dim2n()) throw Error(ErrorCode::DimensionMismatch, "D and L over different algebras");
  const int m = d.dim2n();
  std::complex<double> branch = 1.0;  // (2/i)^{m/2}, m even
  for (int k = 0; k < m / 2; ++k) branch *= std::complex<double>(0.0, -2.0);
  AdiabaticDensity out;
  out.prefactor = branch * std::pow(4.0 * kPi * r, -0.5 * m);
  out.top = top_coefficient(wedge(a_hat(d, r), chern_char(l, r)));
  out.value = z_trace * out.prefactor * out.top;
  const auto top_unit = top_coefficient(wedge(a_hat(degree_two_part(d), 1.0), chern_char(degree_two_part(l), 1.0)));
  out.limit = z_trace * branch * std::pow(4.0 * kPi, -0.5 * m) * top_unit;
  return out;
}

FormElement quadratic_form(const FormMatrix& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.size()) throw Error(ErrorCode::ShapeMismatch, "vector length != matrix size");
  FormElement q(m.dim2n());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      if (x[static_cast<std::size_t>(i)] != 0.0 && x[static_cast<std::size_t>(j)] != 0.0)
        q += m(i, j) * (x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)]);
  return q;
}

FormMatrix mehler_kernel(const FormMatrix& d, const FormMatrix& c_sym, const FormMatrix& l,
                         std::span<const double> x, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::NonpositiveTime, "Mehler kernel needs r > 0");
  const int m = static_cast<int>(x.size());
  if (d.size() != m || c_sym.size() != m) throw Error(ErrorCode::ShapeMismatch, "D and C must be len(x) square");
  if (!c_sym.is_symmetric()) throw Error(ErrorCode::InvalidArgument, "C must be symmetric");
  const int dim = d.dim2n();

  // (X / tanh X) with X = rD/2: sum_k 2^{2k} B_{2k} X^{2k} / (2k)!, terminating in the nilpotent X.
  const FormMatrix half = d * (0.5 * r);
  const FormMatrix half2 = half * half;
  FormMatrix coth = FormMatrix::identity(dim, m);
  FormMatrix power = half2;
  for (int k = 1; 4 * k <= dim && static_cast<std::size_t>(k) < kBernoulliEven.size(); ++k) {
    const double coef = std::ldexp(kBernoulliEven[static_cast<std::size_t>(k)], 2 * k) / factorial(2 * k);
    coth = coth + power * coef;
    power = power * half2;
  }
  const FormElement exponent = quadratic_form(c_sym, x) * 0.125 - quadratic_form(coth, x) * (0.25 / r);
  const FormElement scalar_part = wedge(a_hat(d, r), form_exp(exponent)) * std::pow(4.0 * kPi * r, -0.5 * m);
  FormMatrix out = matrix_exp(l * r);
  for (int i = 0; i < out.size(); ++i)
    for (int j = 0; j < out.size(); ++j) out(i, j) = wedge(scalar_part, out(i, j));
  return out;
}

}  // namespace fkt
