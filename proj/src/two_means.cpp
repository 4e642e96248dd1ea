#include "spdmean/two_means.hpp"

#include <cmath>

#include "spdmean/errors.hpp"

namespace spdmean {

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw ParameterOutOfRange("WeightVector: empty");
  double sum = 0.0;
  for (double w : w_) {
    if (!(w > 0.0)) throw ParameterOutOfRange("WeightVector: weights must be strictly positive");
    sum += w;
  }
  // Skip the division for inputs already normalized to within 1e-14; this
  // keeps serialization round-trips bit-exact.
  if (std::abs(sum - 1.0) > 1e-14)
    for (double& w : w_) w /= sum;
}

WeightVector WeightVector::uniform(int n) {
  if (n < 1) throw ParameterOutOfRange("WeightVector::uniform: n must be >= 1");
  return WeightVector(std::vector<double>(n, 1.0 / n));
}

MatrixTuple::MatrixTuple(std::vector<SpdMatrix> matrices, WeightVector weights)
    : mats_(std::move(matrices)), weights_(std::move(weights)) {
  if (mats_.empty()) throw DimensionMismatch("MatrixTuple: needs at least one matrix");
  if (weights_.size() != static_cast<int>(mats_.size()))
    throw DimensionMismatch("MatrixTuple: weight count does not match matrix count");
  for (const auto& m : mats_)
    if (m.dim() != mats_.front().dim())
      throw DimensionMismatch("MatrixTuple: matrices have mixed dimensions");
}

MatrixTuple MatrixTuple::inverted() const {
  std::vector<SpdMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(mat_inv(m));
  return MatrixTuple(std::move(out), weights_);
}

MatrixTuple MatrixTuple::powered(double p) const {
  std::vector<SpdMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(mat_pow(m, p));
  return MatrixTuple(std::move(out), weights_);
}

MatrixTuple MatrixTuple::congruenced(const Matrix& s) const {
  std::vector<SpdMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(congruence(s, m));
  return MatrixTuple(std::move(out), weights_);
}

MatrixTuple MatrixTuple::scaled(double alpha) const {
  if (!(alpha > 0.0)) throw ParameterOutOfRange("MatrixTuple::scaled: factor must be positive");
  std::vector<SpdMatrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(SpdMatrix(m.matrix() * alpha));
  return MatrixTuple(std::move(out), weights_);
}

MatrixTuple MatrixTuple::permuted(const std::vector<int>& perm) const {
  if (perm.size() != mats_.size()) throw DimensionMismatch("MatrixTuple::permuted");
  std::vector<SpdMatrix> out;
  std::vector<double> w;
  out.reserve(mats_.size());
  w.reserve(mats_.size());
  for (int p : perm) {
    out.push_back(mats_.at(p));
    w.push_back(weights_[p]);
  }
  return MatrixTuple(std::move(out), WeightVector(std::move(w)));
}

SpdMatrix geo_mean(const SpdMatrix& a, const SpdMatrix& b, double t) {
  if (a.dim() != b.dim()) throw DimensionMismatch("geo_mean");
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterOutOfRange("geo_mean: t must lie in [0,1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  auto [root, inv_root] = sqrt_pair(a);
  const Matrix inner = (inv_root * b.matrix() * inv_root).symmetrized();
  auto eig_inner = sym_eig(inner);
  if (!(eig_inner.min_eigenvalue() > 0.0))
    throw IllConditioned("geo_mean: nonpositive computed eigenvalue");
  const Matrix inner_pow = spectral_map(eig_inner, [t](double l) { return std::pow(l, t); });
  return SpdMatrix(root * inner_pow * root);
}

SpdMatrix arithmetic_mean(const MatrixTuple& t) {
  Matrix sum(t.dim(), t.dim());
  for (int i = 0; i < t.size(); ++i) sum += t.matrix(i).matrix() * t.weights()[i];
  return SpdMatrix(sum);
}

SpdMatrix harmonic_mean(const MatrixTuple& t) {
  Matrix sum(t.dim(), t.dim());
  for (int i = 0; i < t.size(); ++i)
    sum += inverse_from_cholesky(t.matrix(i).cholesky_factor()) * t.weights()[i];
  return SpdMatrix(inverse_from_cholesky(SpdMatrix(sum).cholesky_factor()));
}

}  // namespace spdmean
