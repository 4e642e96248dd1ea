#include "spdmean/barycenter.hpp"

#include <cmath>

#include "spdmean/errors.hpp"

namespace spdmean {

BarycenterProblem::BarycenterProblem(Alpha alpha, std::vector<SpdMatrix> matrices)
    : alpha_(alpha), mats_(std::move(matrices)) {
  if (mats_.empty()) throw DimensionMismatch("BarycenterProblem: needs at least one matrix");
  if (alpha_.is_endpoint())
    throw ParameterOutOfRange("BarycenterProblem: |alpha| must be strictly below 1");
  for (const auto& m : mats_)
    if (m.dim() != mats_.front().dim())
      throw DimensionMismatch("BarycenterProblem: matrices have mixed dimensions");
}

MatrixTuple BarycenterProblem::tuple() const {
  return MatrixTuple(mats_, WeightVector::uniform(size()));
}

double phi_value(const BarycenterProblem& p, const SpdMatrix& x) {
  if (x.dim() != p.dim()) throw DimensionMismatch("phi_value");
  double s = 0.0;
  for (const auto& a : p.matrices()) s += logdet_div(p.alpha(), a, x).value;
  return s;
}

Matrix phi_gradient(const BarycenterProblem& p, const SpdMatrix& x) {
  if (x.dim() != p.dim()) throw DimensionMismatch("phi_gradient");
  const double al = p.alpha().value();
  const double wa = 0.5 * (1.0 - al);
  const double wx = 0.5 * (1.0 + al);
  Matrix sum(x.dim(), x.dim());
  for (const auto& a : p.matrices()) {
    const SpdMatrix mix(a.matrix() * wa + x.matrix() * wx);
    sum += inverse_from_cholesky(mix.cholesky_factor());
  }
  sum -= inverse_from_cholesky(x.cholesky_factor()) * static_cast<double>(p.size());
  return sum * (2.0 / (1.0 - al));
}

SolveReport right_mean(const BarycenterProblem& p, const SolverOptions& opts) {
  return g_mean(0.5 * (1.0 - p.alpha().value()), p.tuple(), opts);
}

}  // namespace spdmean
