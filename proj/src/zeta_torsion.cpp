#include "fkt/zeta_torsion.hpp"

#include <cmath>

#include "fkt/error.hpp"

namespace fkt {

namespace {

constexpr double kConditionWarning = 1e8;

double log_coefficient(const GradedDetLine& g) {
  double s = std::log(g.scale);
  for (std::size_t q = 0; q < g.lines.size(); ++q) s += (q % 2 == 0 ? 1.0 : -1.0) * std::log(g.lines[q].coeff);
  return s;
}

double log_torsion(const TorsionElement& t) { return 0.5 * t.zeta_prime0 + log_coefficient(t.rho_prime); }

}  // namespace

ThetaSeries theta_series(const CommutantOp& box, const SpectralTolerances& tol) {
  const SpectralDensity full = spectral_density(box, tol);
  ThetaSeries ts;
  if (full.steps.empty()) return ts;
  const double zero = kernel_threshold(full.steps.back().lambda, tol);
  for (const auto& st : full.steps) {
    if (st.lambda < zero)
      ts.harmonic_dim += st.jump;
    else
      ts.spectrum.steps.push_back(st);
  }
  return ts;
}

ThetaSeries theta_series(const FiniteComplex& c, const MetricFamily& mf, int q, double u,
                         const SpectralTolerances& tol) {
  return theta_series(hermitian_laplacian(c, mf, q, u), tol);
}

double theta(const ThetaSeries& ts, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "theta needs t > 0");
  double s = 0.0;
  for (const auto& st : ts.spectrum.steps) s += st.jump * std::exp(-t * st.lambda);
  return s;
}

std::complex<double> zeta(const ThetaSeries& ts, std::complex<double> s, double lambda) {
  std::complex<double> z = 0.0;
  for (const auto& st : ts.spectrum.steps) {
    const double shifted = st.lambda + lambda;
    if (!(shifted > 0.0)) throw Error(ErrorCode::ShiftedSpectrumNonpositive, "lambda_j + lambda <= 0");
    z += st.jump * std::exp(-s * std::log(shifted));
  }
  return z;
}

double zeta_prime0(const ThetaSeries& ts) {
  double z = 0.0;
  for (const auto& st : ts.spectrum.steps) z -= st.jump * std::log(st.lambda);
  return z;
}

double graded_zeta_prime0(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol) {
  double z = 0.0;
  for (int q = 1; q <= c.top_degree(); ++q)
    z += (q % 2 == 0 ? 1.0 : -1.0) * q * zeta_prime0(theta_series(c, mf, q, u, tol));
  return z;
}

RhoPrime rho_prime(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol) {
  RhoPrime out;
  for (int q = 0; q <= c.top_degree(); ++q) {
    // u = 0 harmonics are base-orthonormal since A(0) = 1.
    const auto v0 = harmonic_basis_orthonormal(c, mf, q, 0.0, tol);
    const auto vu = harmonic_basis_orthonormal(c, mf, q, u, tol);
    const CommutantOp s = mf.metric_sqrt(q, u);
    std::vector<int> dims;
    double log_det_half = 0.0;  // log Det_tau'(C_u)^{1/2}
    for (std::size_t i = 0; i < v0.size(); ++i) {
      if (v0[i].cols() != vu[i].cols())
        throw Error(ErrorCode::BettiNumberChanged,
                    "harmonic dimension changed in degree " + std::to_string(q) + ", factor " + std::to_string(i));
      dims.push_back(static_cast<int>(v0[i].cols()));
      if (v0[i].cols() == 0) continue;
      // C_u = M^* M with M = U~^* A^{1/2} V0 (U~ orthonormal in u-coordinates).
      const Matrix m = vu[i].adjoint() * s.block(i) * v0[i];
      Eigen::JacobiSVD<Matrix> svd(m);
      const auto& sv = svd.singularValues();
      const double smin = sv(sv.size() - 1);
      if (!(smin > 0.0)) throw Error(ErrorCode::Singular, "harmonic identification is singular");
      out.max_condition = std::max(out.max_condition, (sv(0) / smin) * (sv(0) / smin));
      double log_abs_det = 0.0;
      for (Eigen::Index j = 0; j < sv.size(); ++j) log_abs_det += std::log(sv(j));
      log_det_half += c.algebra.weight(i) * log_abs_det;
    }
    out.line.lines.push_back({Module(c.algebra, dims), std::exp(-log_det_half)});
  }
  out.ill_conditioned = out.max_condition > kConditionWarning;
  return out;
}

TorsionElement torsion(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol) {
  TorsionElement t;
  t.u = u;
  t.zeta_prime0 = graded_zeta_prime0(c, mf, u, tol);
  t.scalar = std::exp(0.5 * t.zeta_prime0);
  t.rho_prime = rho_prime(c, mf, u, tol).line;
  return t;
}

double supertrace_z_harmonic(const FiniteComplex& c, const MetricFamily& mf, double u, const SpectralTolerances& tol) {
  double s = 0.0;
  for (int q = 0; q <= c.top_degree(); ++q) {
    const auto p = hodge_projectors(c, mf, q, u, tol);
    s += (q % 2 == 0 ? 1.0 : -1.0) * canonical_trace(mf.z(q, u) * p.harmonic).real();
  }
  return s;
}

double anomaly_c(const FiniteComplex& c, const MetricFamily& mf, double u) {
  double s = 0.0;
  for (int q = 0; q <= c.top_degree(); ++q) s += (q % 2 == 0 ? 1.0 : -1.0) * canonical_trace(mf.z(q, u)).real();
  return 0.5 * s;
}

VariationCheck variation_check(const FiniteComplex& c, const MetricFamily& mf, double u, double h,
                               const SpectralTolerances& tol) {
  if (!(h > 0.0) || h > 1e-2)
    throw Error(ErrorCode::StepTooLarge, "finite-difference step must lie in (0, 1e-2]");
  const TorsionElement plus = torsion(c, mf, u + h, tol);
  const TorsionElement minus = torsion(c, mf, u - h, tol);
  const double str_zp = supertrace_z_harmonic(c, mf, u, tol);

  VariationCheck v;
  v.anomaly = anomaly_c(c, mf, u);
  v.lhs = (log_torsion(plus) - log_torsion(minus)) / (2.0 * h);
  v.rhs = -v.anomaly;
  v.gap = std::abs(v.lhs - v.rhs);
  v.zeta_lhs = (plus.zeta_prime0 - minus.zeta_prime0) / (2.0 * h);
  v.zeta_rhs = str_zp - 2.0 * v.anomaly;
  v.zeta_gap = std::abs(v.zeta_lhs - v.zeta_rhs);
  v.rho_prime_lhs = (log_coefficient(plus.rho_prime) - log_coefficient(minus.rho_prime)) / (2.0 * h);
  v.rho_prime_rhs = -0.5 * str_zp;
  v.rho_prime_gap = std::abs(v.rho_prime_lhs - v.rho_prime_rhs);
  return v;
}

RelativeTorsion relative_torsion(const FiniteComplex& ce, const FiniteComplex& cf, const MetricFamily& mfe,
                                 const MetricFamily& mff, double u, const SpectralTolerances& tol) {
  RelativeTorsion r{torsion(ce, mfe, u, tol), torsion(cf, mff, u, tol), 1.0};
  r.ratio = std::exp(log_torsion(r.e) - log_torsion(r.f));
  return r;
}

GradedDetLine correspondence_apply(const TorsionElement& rho_e, const TorsionElement& rho_f, const GradedDetLine& x) {
  const double ce = rho_e.coefficient();
  if (ce == 0.0 || !std::isfinite(ce)) throw Error(ErrorCode::ZeroTorsion, "source torsion has zero coefficient");
  GradedDetLine out = rho_f.rho_prime;
  out.scale *= rho_f.scalar * (x.coefficient() / ce);
  return out;
}

}  // namespace fkt
