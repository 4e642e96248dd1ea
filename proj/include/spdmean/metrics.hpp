// Distances and divergences on the SPD cone: Thompson metric, Riemannian
// trace distance, Bures-Wasserstein distance, log-determinant α-divergence
// family and the Stein metric derived from it.

#pragma once

#include <vector>

#include "spdmean/spd.hpp"

namespace spdmean {

/// Divergence-order parameter α ∈ [−1, 1].
class Alpha {
 public:
  explicit Alpha(double value);
  double value() const { return v_; }
  bool is_endpoint() const { return v_ == 1.0 || v_ == -1.0; }

 private:
  double v_;
};

/// Nonnegative divergence value tagged with the α that produced it.
struct DivergenceValue {
  double value;
  Alpha alpha;
};

/// Thompson (part) metric:
/// d(A,B) = max{log λ₁(A^{−1/2}BA^{−1/2}), log λ₁(B^{−1/2}AB^{−1/2})}
///        = ‖log(A^{−1/2}BA^{−1/2})‖ in spectral norm.
double thompson(const SpdMatrix& a, const SpdMatrix& b);

/// Riemannian trace distance ‖log(A^{−1/2}BA^{−1/2})‖_F.
double riemannian(const SpdMatrix& a, const SpdMatrix& b);

/// Bures-Wasserstein distance [tr(A + B − 2(A^{1/2}BA^{1/2})^{1/2})]^{1/2}.
/// Throws NegativeTrace if the trace argument falls below −1e-10.
double bures_wasserstein(const SpdMatrix& a, const SpdMatrix& b);

/// Log-determinant α-divergence. For |α| < 1:
///   D_α(A|B) = 4/(1−α²)·log[ det((1−α)/2·A + (1+α)/2·B)
///                            / (det A^{(1−α)/2}·det B^{(1+α)/2}) ]
/// with the Stein-loss closed forms at the endpoints:
///   D_{−1}(A|B) = tr(A⁻¹B − I) − log det(A⁻¹B)
///   D_{+1}(A|B) = tr(B⁻¹A − I) − log det(B⁻¹A).
/// Values in [−1e-12, 0) are clamped to 0; anything lower throws
/// NumericsError.
DivergenceValue logdet_div(Alpha alpha, const SpdMatrix& a, const SpdMatrix& b);

/// Stein metric d_S(A,B) = √D₀(A|B).
double stein_metric(const SpdMatrix& a, const SpdMatrix& b);

/// Finite-difference probe of the quantum-divergence conditions for
/// B ↦ D_α(A|B) at B = A along one direction.
struct QdivProbe {
  double first_derivative;   // central difference; ≈ 0 at the diagonal
  double second_difference;  // ≥ 0 at the diagonal
  double analytic_second;    // tr((A^{−1/2}XA^{−1/2})²)
};

/// Runs the probe for each symmetric direction with step h. Throws
/// StepTooLarge if A ± hX leaves the SPD cone.
std::vector<QdivProbe> qdiv_check(Alpha alpha, const SpdMatrix& a,
                                  const std::vector<Matrix>& directions, double h);

}  // namespace spdmean
