#include "spdmean/spd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spdmean/errors.hpp"

namespace spdmean {

SpdMatrix::SpdMatrix(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("SpdMatrix: input not square");
  if (m.rows() == 0) throw DimensionMismatch("SpdMatrix: empty matrix");
  m_ = m.symmetrized();
  auto chol = cholesky(m_);
  if (!chol) throw NotPositiveDefinite("SpdMatrix: matrix is not positive definite");
  chol_ = std::move(*chol);
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(Matrix::identity(dim)); }

SpdMatrix SpdMatrix::diagonal(const std::vector<double>& diag) {
  Matrix m(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = diag[i];
  return SpdMatrix(m);
}

Matrix EigDecomposition::reconstruct() const {
  const int n = basis.rows();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += basis(i, k) * eigenvalues[k] * basis(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  return out;
}

EigDecomposition sym_eig(const Matrix& a_in) {
  if (!a_in.is_square()) throw DimensionMismatch("sym_eig: matrix not square");
  const int n = a_in.rows();
  Matrix a = a_in.symmetrized();
  Matrix v = Matrix::identity(n);

  const double norm = a.frobenius_norm();
  const double threshold = 1e-14 * norm;
  constexpr int kMaxSweeps = 100;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (n > 1 && off_norm() > threshold) {
    if (++sweep > kMaxSweeps) throw IllConditioned("sym_eig: Jacobi sweep cap exceeded");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation that annihilates a(p,q).
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.basis = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.basis(i, j) = v(i, order[j]);
  }
  return out;
}

EigDecomposition sym_eig(const SpdMatrix& a) { return sym_eig(a.matrix()); }

namespace {

EigDecomposition positive_eig(const SpdMatrix& a, const char* who) {
  auto eig = sym_eig(a.matrix());
  for (double l : eig.eigenvalues)
    if (!(l > 0.0)) throw IllConditioned(std::string(who) + ": nonpositive computed eigenvalue");
  return eig;
}

}  // namespace

SqrtPair sqrt_pair(const SpdMatrix& a) {
  auto eig = positive_eig(a, "sqrt_pair");
  return {spectral_map(eig, [](double l) { return std::sqrt(l); }),
          spectral_map(eig, [](double l) { return 1.0 / std::sqrt(l); })};
}

SpdMatrix mat_pow(const SpdMatrix& a, double p) {
  if (p == 1.0) return a;
  auto eig = positive_eig(a, "mat_pow");
  return SpdMatrix(spectral_map(eig, [p](double l) { return std::pow(l, p); }));
}

SpdMatrix mat_sqrt(const SpdMatrix& a) { return mat_pow(a, 0.5); }

SpdMatrix mat_inv(const SpdMatrix& a) {
  return SpdMatrix(inverse_from_cholesky(a.cholesky_factor()));
}

Matrix mat_log(const SpdMatrix& a) {
  auto eig = positive_eig(a, "mat_log");
  return spectral_map(eig, [](double l) { return std::log(l); });
}

SpdMatrix mat_exp(const Matrix& sym) {
  auto eig = sym_eig(sym);
  return SpdMatrix(spectral_map(eig, [](double l) { return std::exp(l); }));
}

SpdMatrix congruence(const Matrix& s, const SpdMatrix& a) {
  if (!s.is_square() || s.rows() != a.dim()) throw DimensionMismatch("congruence");
  // Invertibility test: |det S| against the Hadamard bound ∏‖rowᵢ‖.
  double hadamard = 1.0;
  for (int i = 0; i < s.rows(); ++i) {
    double r = 0.0;
    for (int j = 0; j < s.cols(); ++j) r += s(i, j) * s(i, j);
    hadamard *= std::sqrt(r);
  }
  const double det = determinant(s);
  if (!(std::abs(det) > 1e-14 * hadamard))
    throw SingularTransform("congruence: transform is numerically singular");
  return SpdMatrix(s * a.matrix() * s.transposed());
}

bool loewner_leq(const SpdMatrix& a, const SpdMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch("loewner_leq");
  auto eig = sym_eig(b.matrix() - a.matrix());
  return eig.min_eigenvalue() >= -tol;
}

double spectral_norm(const SpdMatrix& a) {
  return positive_eig(a, "spectral_norm").max_eigenvalue();
}

double min_eigenvalue(const SpdMatrix& a) {
  return positive_eig(a, "min_eigenvalue").min_eigenvalue();
}

}  // namespace spdmean
