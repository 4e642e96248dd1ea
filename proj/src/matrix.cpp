#include "spdmean/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "spdmean/errors.hpp"

namespace spdmean {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("Matrix: negative dimension");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw DimensionMismatch("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("Matrix::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("Matrix::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw DimensionMismatch("Matrix::operator*");
  Matrix out(lhs.rows_, rhs.cols_);
  for (int i = 0; i < lhs.rows_; ++i) {
    for (int k = 0; k < lhs.cols_; ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::symmetrized() const {
  if (!is_square()) throw DimensionMismatch("symmetrized: matrix not square");
  Matrix out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
  return out;
}

double Matrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

std::optional<Matrix> cholesky(const Matrix& a) {
  if (!a.is_square()) return std::nullopt;
  const int n = a.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  if (!(max_diag > 0.0)) return std::nullopt;
  const double pivot_floor = 1e-13 * max_diag;

  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > pivot_floor)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Matrix inverse_from_cholesky(const Matrix& l) {
  const int n = l.rows();
  // Invert the triangle, then form L⁻ᵀ L⁻¹.
  Matrix linv(n, n);
  for (int j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += l(i, k) * linv(k, j);
      linv(i, j) = -s / l(i, i);
    }
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = i; k < n; ++k) s += linv(k, i) * linv(k, j);
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

double log_det_from_cholesky(const Matrix& l) {
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Matrix whiten(const Matrix& l, const Matrix& b) {
  if (l.rows() != b.rows() || !b.is_square()) throw DimensionMismatch("whiten");
  const int n = l.rows();
  // Y = L⁻¹ B  (forward substitution column by column)...
  Matrix y(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = b(i, j);
      for (int k = 0; k < i; ++k) s -= l(i, k) * y(k, j);
      y(i, j) = s / l(i, i);
    }
  }
  // ...then M = Y L⁻ᵀ, i.e. solve Mᵀ from L Mᵀ = Yᵀ.
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = y(i, j);
      for (int k = 0; k < j; ++k) s -= l(j, k) * m(i, k);
      m(i, j) = s / l(j, j);
    }
  }
  return m.symmetrized();
}

double determinant(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("determinant: matrix not square");
  const int n = a.rows();
  Matrix lu = a;
  double det = 1.0;
  for (int j = 0; j < n; ++j) {
    int piv = j;
    for (int i = j + 1; i < n; ++i)
      if (std::abs(lu(i, j)) > std::abs(lu(piv, j))) piv = i;
    if (piv != j) {
      for (int k = 0; k < n; ++k) std::swap(lu(j, k), lu(piv, k));
      det = -det;
    }
    const double p = lu(j, j);
    if (p == 0.0) return 0.0;
    det *= p;
    for (int i = j + 1; i < n; ++i) {
      const double f = lu(i, j) / p;
      lu(i, j) = f;
      for (int k = j + 1; k < n; ++k) lu(i, k) -= f * lu(j, k);
    }
  }
  return det;
}

}  // namespace spdmean
