// Symmetric positive definite matrices and the matrix functions built on
// their eigendecomposition.

#pragma once

#include <vector>

#include "spdmean/matrix.hpp"

namespace spdmean {

/// Real symmetric positive definite matrix. Input is symmetrized as
/// (M + Mᵀ)/2 on construction and rejected unless a Cholesky factorization
/// succeeds, so a live SpdMatrix is always exactly symmetric and numerically
/// positive definite. Values are immutable.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);

  static SpdMatrix identity(int dim);
  static SpdMatrix diagonal(const std::vector<double>& diag);

  int dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Cached lower Cholesky factor from the construction-time check.
  const Matrix& cholesky_factor() const { return chol_; }

  double log_det() const { return log_det_from_cholesky(chol_); }
  double trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }

 private:
  Matrix m_;
  Matrix chol_;
};

/// Eigendecomposition of a real symmetric matrix: A = basis·diag(λ)·basisᵀ
/// with eigenvalues sorted descending and an orthogonal basis.
struct EigDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix basis;                     // columns are eigenvectors

  Matrix reconstruct() const;
  double max_eigenvalue() const { return eigenvalues.front(); }
  double min_eigenvalue() const { return eigenvalues.back(); }
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps until the
/// off-diagonal Frobenius norm drops below 1e-14·‖A‖_F, capped at 100
/// sweeps (throws IllConditioned at the cap).
EigDecomposition sym_eig(const Matrix& a);
EigDecomposition sym_eig(const SpdMatrix& a);

/// basis·diag(f(λᵢ))·basisᵀ for an arbitrary scalar function f.
template <typename F>
Matrix spectral_map(const EigDecomposition& eig, F&& f) {
  const int n = eig.basis.rows();
  std::vector<double> fv(eig.eigenvalues.size());
  for (std::size_t k = 0; k < fv.size(); ++k) fv[k] = f(eig.eigenvalues[k]);
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += eig.basis(i, k) * fv[k] * eig.basis(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  return out;
}

/// A^{1/2} and A^{−1/2} from a single eigendecomposition.
struct SqrtPair {
  Matrix root;
  Matrix inv_root;
};
SqrtPair sqrt_pair(const SpdMatrix& a);

/// A^p through the eigendecomposition; p may be any real.
SpdMatrix mat_pow(const SpdMatrix& a, double p);

/// Principal square root.
SpdMatrix mat_sqrt(const SpdMatrix& a);

/// Inverse (via Cholesky; agrees with the eigendecomposition route to
/// round-off).
SpdMatrix mat_inv(const SpdMatrix& a);

/// Matrix logarithm; the result is symmetric but in general indefinite.
Matrix mat_log(const SpdMatrix& a);

/// Matrix exponential of a symmetric matrix; always SPD.
SpdMatrix mat_exp(const Matrix& sym);

/// Congruence transform S·A·Sᵀ. S must pass an invertibility test
/// (|det S| relative to the Hadamard bound > 1e-14), else SingularTransform.
SpdMatrix congruence(const Matrix& s, const SpdMatrix& a);

/// Loewner order test: true iff the smallest eigenvalue of B − A is ≥ −tol.
bool loewner_leq(const SpdMatrix& a, const SpdMatrix& b, double tol);

/// Largest eigenvalue (spectral norm for SPD inputs).
double spectral_norm(const SpdMatrix& a);

/// Smallest eigenvalue.
double min_eigenvalue(const SpdMatrix& a);

}  // namespace spdmean
