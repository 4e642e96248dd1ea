#include "spdmean/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "spdmean/errors.hpp"

namespace spdmean {

namespace {

// Eigenvalues of A^{−1/2}BA^{−1/2} = eigenvalues of L⁻¹BL⁻ᵀ for L = chol(A).
std::vector<double> relative_eigenvalues(const SpdMatrix& a, const SpdMatrix& b,
                                         const char* who) {
  if (a.dim() != b.dim()) throw DimensionMismatch(who);
  auto eig = sym_eig(whiten(a.cholesky_factor(), b.matrix()));
  for (double l : eig.eigenvalues)
    if (!(l > 0.0)) throw IllConditioned(std::string(who) + ": nonpositive relative eigenvalue");
  return eig.eigenvalues;
}

}  // namespace

Alpha::Alpha(double value) : v_(value) {
  if (!(std::abs(value) <= 1.0)) throw ParameterOutOfRange("Alpha: |value| must be <= 1");
}

double thompson(const SpdMatrix& a, const SpdMatrix& b) {
  double m = 0.0;
  for (double l : relative_eigenvalues(a, b, "thompson")) m = std::max(m, std::abs(std::log(l)));
  return m;
}

double riemannian(const SpdMatrix& a, const SpdMatrix& b) {
  double s = 0.0;
  for (double l : relative_eigenvalues(a, b, "riemannian")) {
    const double x = std::log(l);
    s += x * x;
  }
  return std::sqrt(s);
}

double bures_wasserstein(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("bures_wasserstein");
  auto eig_a = sym_eig(a);
  if (!(eig_a.min_eigenvalue() > 0.0))
    throw IllConditioned("bures_wasserstein: nonpositive computed eigenvalue");
  const Matrix root = spectral_map(eig_a, [](double l) { return std::sqrt(l); });
  const Matrix inner = (root * b.matrix() * root).symmetrized();
  auto eig = sym_eig(inner);
  double cross = 0.0;
  for (double l : eig.eigenvalues) {
    if (!(l > 0.0)) throw IllConditioned("bures_wasserstein: nonpositive computed eigenvalue");
    cross += std::sqrt(l);
  }
  const double arg = a.trace() + b.trace() - 2.0 * cross;
  if (arg < -1e-10) throw NegativeTrace("bures_wasserstein: trace argument below -1e-10");
  return std::sqrt(std::max(arg, 0.0));
}

namespace {

double clamp_divergence(double v) {
  if (v >= 0.0) return v;
  if (v >= -1e-12) return 0.0;
  throw NumericsError("logdet_div: divergence below -1e-12");
}

// tr(A⁻¹B) via the Cholesky-inverse of A.
double trace_inv_product(const SpdMatrix& a, const SpdMatrix& b) {
  const Matrix ainv = inverse_from_cholesky(a.cholesky_factor());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += ainv(i, j) * b(j, i);
  return s;
}

}  // namespace

DivergenceValue logdet_div(Alpha alpha, const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("logdet_div");
  const double al = alpha.value();
  const int m = a.dim();
  double v;
  if (al == -1.0) {
    v = trace_inv_product(a, b) - m - (b.log_det() - a.log_det());
  } else if (al == 1.0) {
    v = trace_inv_product(b, a) - m - (a.log_det() - b.log_det());
  } else {
    const double wa = 0.5 * (1.0 - al);
    const double wb = 0.5 * (1.0 + al);
    const SpdMatrix mix(a.matrix() * wa + b.matrix() * wb);
    v = (4.0 / (1.0 - al * al)) * (mix.log_det() - wa * a.log_det() - wb * b.log_det());
  }
  return {clamp_divergence(v), alpha};
}

double stein_metric(const SpdMatrix& a, const SpdMatrix& b) {
  return std::sqrt(logdet_div(Alpha(0.0), a, b).value);
}

std::vector<QdivProbe> qdiv_check(Alpha alpha, const SpdMatrix& a,
                                  const std::vector<Matrix>& directions, double h) {
  if (!(h > 0.0)) throw ParameterOutOfRange("qdiv_check: step h must be positive");
  std::vector<QdivProbe> out;
  out.reserve(directions.size());
  const double phi0 = logdet_div(alpha, a, a).value;
  for (const Matrix& x : directions) {
    if (x.rows() != a.dim() || !x.is_square()) throw DimensionMismatch("qdiv_check: direction");
    QdivProbe probe{};
    const Matrix w = whiten(a.cholesky_factor(), x.symmetrized());
    probe.analytic_second = w.frobenius_norm() * w.frobenius_norm();
    if (x.max_abs() == 0.0) {
      out.push_back(probe);
      continue;
    }
    double phi_plus, phi_minus;
    try {
      phi_plus = logdet_div(alpha, a, SpdMatrix(a.matrix() + x.symmetrized() * h)).value;
      phi_minus = logdet_div(alpha, a, SpdMatrix(a.matrix() - x.symmetrized() * h)).value;
    } catch (const NotPositiveDefinite&) {
      throw StepTooLarge("qdiv_check: A ± hX left the SPD cone");
    }
    probe.first_derivative = (phi_plus - phi_minus) / (2.0 * h);
    probe.second_difference = (phi_plus - 2.0 * phi0 + phi_minus) / (h * h);
    out.push_back(probe);
  }
  return out;
}

}  // namespace spdmean
