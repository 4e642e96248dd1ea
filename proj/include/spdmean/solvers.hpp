// Multivariable matrix means defined by nonlinear fixed-point equations:
// the resolvent-type mean G_t, the matrix power mean, the Cartan (Karcher)
// mean, the Wasserstein mean and the Rényi power mean, plus closed forms
// and solver diagnostics.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spdmean/errors.hpp"
#include "spdmean/two_means.hpp"

namespace spdmean {

struct SolverOptions {
  /// Convergence threshold on the Thompson distance between successive
  /// iterates.
  double tol = 1e-12;
  int max_iter = 10000;
  enum class Init { ArithmeticMean, HarmonicMean, Identity, Custom };
  Init init = Init::ArithmeticMean;
  /// Starting point when init == Init::Custom.
  std::optional<SpdMatrix> custom_init = std::nullopt;
};

struct SolveReport {
  SpdMatrix solution;
  int iterations = 0;
  /// Thompson distance of the final iteration step.
  double residual = 0.0;
  /// ‖X − f(X)‖_F for the defining fixed-point map f.
  double fixed_point_residual = 0.0;
  /// In [0, 1). For g_mean this is the Banach factor
  /// (1−t)·λ₁(X) / ((1−t)·λ₁(X) + t·minᵢλ_m(Aᵢ)); for the power mean the
  /// a-priori factor 1−t of its iteration map; otherwise an empirical
  /// step-ratio estimate.
  double contraction_estimate = 0.0;
  /// True when the result came from a convention or closed form without
  /// iterating (t = 0, t = 1, single-matrix tuples).
  bool direct = false;
};

/// Iteration cap reached; carries the best iterate found so far.
class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(const std::string& msg, SolveReport best)
      : Error(msg), best_(std::move(best)) {}
  const SolveReport& best_iterate() const { return best_; }

 private:
  SolveReport best_;
};

/// The mean G_t(ω; 𝔸): unique positive definite solution of
///   X = [Σ wᵢ((1−t)X + tAᵢ)⁻¹]⁻¹,  t ∈ (0,1],
/// solved by iterating the right-hand side (a strict Thompson contraction).
/// t = 0 returns the arithmetic mean by the limit convention and t = 1 the
/// harmonic mean; both are flagged `direct`. For t < 0.01 the update is
/// damped through the geodesic midpoint Xₖ₊₁ = Xₖ #_{1/2} f(Xₖ), which
/// leaves the fixed point unchanged. Converged solutions are additionally
/// held to resolvent_residual ≤ max(1e-8, 100·tol); a violation throws
/// NumericsError.
SolveReport g_mean(double t, const MatrixTuple& tuple, const SolverOptions& opts = {});

/// Solver-independent certificate for g_mean: Frobenius norm of
/// Σ wᵢ[(1−t)I + tX^{−1/2}AᵢX^{−1/2}]⁻¹ − I, which vanishes exactly at
/// X = G_t(ω; 𝔸). Requires t ∈ (0,1].
double resolvent_residual(const SpdMatrix& x, double t, const MatrixTuple& tuple);

/// Matrix power mean P_t, t ∈ [−1,1]\{0}: for t > 0 the fixed point of
/// X = Σ wᵢ X#ₜAᵢ; for t < 0 computed as P_{−t}(ω; 𝔸⁻¹)⁻¹.
SolveReport power_mean(double t, const MatrixTuple& tuple, const SolverOptions& opts = {});

/// Cartan (Karcher) mean: zero of Σ wᵢ log(X^{−1/2}AᵢX^{−1/2}), found by the
/// exponential update X ← X^{1/2}·exp(Σ wᵢ log(X^{−1/2}AᵢX^{−1/2}))·X^{1/2}
/// with step halving as a safeguard. Stops when the Karcher residual drops
/// below tol·n.
SolveReport cartan_mean(const MatrixTuple& tuple, const SolverOptions& opts = {});

/// ‖Σ wᵢ log(X^{−1/2}AᵢX^{−1/2})‖_F — the Karcher equation residual.
double karcher_residual(const SpdMatrix& x, const MatrixTuple& tuple);

/// Wasserstein mean: fixed point of X = Σ wᵢ(X^{1/2}AᵢX^{1/2})^{1/2}.
SolveReport wasserstein_mean(const MatrixTuple& tuple, const SolverOptions& opts = {});

/// Rényi power mean R_{t,z}, 0 < t ≤ z < 1: fixed point of
/// X = Σ wⱼ(X^{t/2z} Aⱼ^{(1−t)/z} X^{t/2z})^z. Coincides with the
/// Wasserstein mean at t = z = 1/2.
SolveReport renyi_power_mean(double t, double z, const MatrixTuple& tuple,
                             const SolverOptions& opts = {});

/// Closed form for two matrices tied by (t−w₁)A = (w₂−t)B with t strictly
/// between w₁ and w₂ (either order):
///   G_t(ω; A, B) = √(t(t−w₁)/((1−t)(w₂−t)))·A.
/// Throws PreconditionViolated unless the proportionality holds within
/// 1e-10 relative and the ordering is strict.
SpdMatrix closed_form_two(double t, double w1, double w2, const SpdMatrix& a,
                          const SpdMatrix& b);

/// For each p in the grid, the Thompson distance between G_t(ω; 𝔸^p)^{1/p}
/// and the log-Euclidean mean exp(Σ wᵢ log Aᵢ). The distances decrease
/// toward 0 as p → 0 and vanish identically for commuting tuples.
std::vector<std::pair<double, double>> lie_trotter_limit(const MatrixTuple& tuple, double t,
                                                         const std::vector<double>& p_grid,
                                                         const SolverOptions& opts = {});

/// One-step contraction certificate for the g_mean iteration map f at
/// parameter t ∈ (0,1): returns (d(f(X),f(Y)), q·d(X,Y)) with
/// q = (1−t)α/((1−t)α + t·minᵢλ_m(Aᵢ)), α = max(λ₁(X), λ₁(Y));
/// the first component never exceeds the second.
std::pair<double, double> contraction_check(double t, const MatrixTuple& tuple,
                                            const SpdMatrix& x, const SpdMatrix& y);

}  // namespace spdmean
