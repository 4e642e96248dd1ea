// Right mean for the log-determinant α-divergence: the minimizer of
// φ(X) = Σᵢ D_α(Aᵢ|X) over the SPD cone, together with its gradient
// certificate. The minimizer coincides with the fixed-point mean at
// t = (1−α)/2 under uniform weights, so the solver is a thin adapter.

#pragma once

#include <vector>

#include "spdmean/metrics.hpp"
#include "spdmean/solvers.hpp"

namespace spdmean {

/// Barycenter problem for Σᵢ D_α(Aᵢ|X) with uniform weights; requires
/// |α| < 1.
class BarycenterProblem {
 public:
  BarycenterProblem(Alpha alpha, std::vector<SpdMatrix> matrices);

  Alpha alpha() const { return alpha_; }
  int size() const { return static_cast<int>(mats_.size()); }
  int dim() const { return mats_.front().dim(); }
  const std::vector<SpdMatrix>& matrices() const { return mats_; }

  /// The matrices with uniform weights, as consumed by the solvers.
  MatrixTuple tuple() const;

 private:
  Alpha alpha_;
  std::vector<SpdMatrix> mats_;
};

/// Objective value φ(X) = Σᵢ D_α(Aᵢ|X).
double phi_value(const BarycenterProblem& p, const SpdMatrix& x);

/// Gradient ∇φ(X) = 2/(1−α)·[Σᵢ((1−α)/2·Aᵢ + (1+α)/2·X)⁻¹ − nX⁻¹];
/// vanishes exactly at the right mean.
Matrix phi_gradient(const BarycenterProblem& p, const SpdMatrix& x);

/// The right mean argmin φ, computed as g_mean with t = (1−α)/2 and uniform
/// weights (identical code path, so the two characterizations agree bitwise).
SolveReport right_mean(const BarycenterProblem& p, const SolverOptions& opts = {});

}  // namespace spdmean
