// Dense real matrix with the handful of operations the mean solvers need.
// Row-major storage, 64-bit floats throughout.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace spdmean {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix m, double s) { return m *= s; }
  friend Matrix operator*(double s, Matrix m) { return m *= s; }
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

  Matrix transposed() const;

  /// (M + Mᵀ)/2; requires a square matrix.
  Matrix symmetrized() const;

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric(double tol) const;

  const std::vector<double>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular Cholesky factor of a symmetric matrix, or nullopt if a
/// pivot falls below 1e-13 times the largest diagonal entry (i.e. the matrix
/// is not numerically positive definite).
std::optional<Matrix> cholesky(const Matrix& a);

/// Inverse of an SPD matrix given its lower Cholesky factor.
Matrix inverse_from_cholesky(const Matrix& chol_lower);

/// log det of an SPD matrix given its lower Cholesky factor: 2·Σ log Lᵢᵢ.
double log_det_from_cholesky(const Matrix& chol_lower);

/// Whitening transform L⁻¹ B L⁻ᵀ for the lower-triangular L = chol(A).
/// Its eigenvalues are the generalized eigenvalues of (B, A).
Matrix whiten(const Matrix& chol_lower, const Matrix& b);

/// Determinant via LU with partial pivoting (general square matrices).
double determinant(const Matrix& a);

}  // namespace spdmean
