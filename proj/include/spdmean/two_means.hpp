// Weighted tuples of SPD matrices and the two-variable building blocks:
// geodesic (weighted geometric) mean, arithmetic mean, harmonic mean.

#pragma once

#include <vector>

#include "spdmean/spd.hpp"

namespace spdmean {

/// Positive probability vector: every weight strictly positive, renormalized
/// to sum 1 at construction.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  static WeightVector uniform(int n);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// Ordered tuple (A₁,…,Aₙ) of equal-dimension SPD matrices with weights.
class MatrixTuple {
 public:
  MatrixTuple(std::vector<SpdMatrix> matrices, WeightVector weights);

  int size() const { return static_cast<int>(mats_.size()); }
  int dim() const { return mats_.front().dim(); }
  const SpdMatrix& matrix(int i) const { return mats_[i]; }
  const std::vector<SpdMatrix>& matrices() const { return mats_; }
  const WeightVector& weights() const { return weights_; }

  /// (A₁⁻¹,…,Aₙ⁻¹) with the same weights.
  MatrixTuple inverted() const;
  /// (A₁ᵖ,…,Aₙᵖ) with the same weights.
  MatrixTuple powered(double p) const;
  /// (S·A₁·Sᵀ,…) with the same weights.
  MatrixTuple congruenced(const Matrix& s) const;
  /// (α·A₁,…) with the same weights.
  MatrixTuple scaled(double alpha) const;
  /// Reindexed by a permutation of {0,…,n−1}; weights follow the matrices.
  MatrixTuple permuted(const std::vector<int>& perm) const;

 private:
  std::vector<SpdMatrix> mats_;
  WeightVector weights_;
};

/// Point at parameter t on the geodesic from A to B:
/// A#ₜB = A^{1/2}(A^{−1/2}BA^{−1/2})ᵗA^{1/2}, t ∈ [0,1].
SpdMatrix geo_mean(const SpdMatrix& a, const SpdMatrix& b, double t);

/// Σ wᵢAᵢ
SpdMatrix arithmetic_mean(const MatrixTuple& t);

/// [Σ wᵢAᵢ⁻¹]⁻¹
SpdMatrix harmonic_mean(const MatrixTuple& t);

}  // namespace spdmean
