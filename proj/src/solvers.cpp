#include "spdmean/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spdmean/metrics.hpp"

namespace spdmean {

namespace {

void validate(const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw ParameterOutOfRange("SolverOptions: tol must be positive");
  if (opts.max_iter < 1) throw ParameterOutOfRange("SolverOptions: max_iter must be >= 1");
}

SpdMatrix initial_iterate(const MatrixTuple& t, const SolverOptions& opts) {
  switch (opts.init) {
    case SolverOptions::Init::ArithmeticMean:
      return arithmetic_mean(t);
    case SolverOptions::Init::HarmonicMean:
      return harmonic_mean(t);
    case SolverOptions::Init::Identity:
      return SpdMatrix::identity(t.dim());
    case SolverOptions::Init::Custom:
      if (!opts.custom_init) throw PreconditionViolated("SolverOptions: Custom init without matrix");
      if (opts.custom_init->dim() != t.dim())
        throw DimensionMismatch("SolverOptions: custom init dimension");
      return *opts.custom_init;
  }
  throw ParameterOutOfRange("SolverOptions: unknown init");
}

// Inverse of an SPD combination given as a plain symmetric matrix.
Matrix inv_sym(const Matrix& m) {
  auto chol = cholesky(m.symmetrized());
  if (!chol) throw IllConditioned("solver: intermediate matrix lost positive definiteness");
  return inverse_from_cholesky(*chol);
}

// f(X) = [Σ wᵢ((1−t)X + tAᵢ)⁻¹]⁻¹
SpdMatrix g_map(double t, const MatrixTuple& tuple, const SpdMatrix& x) {
  Matrix sum(tuple.dim(), tuple.dim());
  for (int i = 0; i < tuple.size(); ++i)
    sum += inv_sym(x.matrix() * (1.0 - t) + tuple.matrix(i).matrix() * t) * tuple.weights()[i];
  return SpdMatrix(inv_sym(sum));
}

// Geodesic midpoint A#B through the Cholesky factor of A; algebraically the
// same point as geo_mean(a, b, 1/2).
SpdMatrix geo_midpoint_chol(const SpdMatrix& a, const SpdMatrix& b) {
  const Matrix& l = a.cholesky_factor();
  auto eig = sym_eig(whiten(l, b.matrix()));
  if (!(eig.min_eigenvalue() > 0.0))
    throw IllConditioned("geo_midpoint: nonpositive relative eigenvalue");
  const Matrix w = spectral_map(eig, [](double v) { return std::sqrt(v); });
  return SpdMatrix(l * w * l.transposed());
}

struct IterOutcome {
  SpdMatrix x;
  int iterations = 0;
  double last_step = 0.0;      // Thompson distance of the final step
  double rate_estimate = 0.0;  // geometric-mean decay of the step norms
  bool converged = false;
};

// Iterates x ← damp(x, map(x)) until the Thompson distance between
// successive iterates drops to tol. The exact Thompson distance is only
// evaluated when a Frobenius-based estimate says the step is small enough
// (refreshed on every exact evaluation and every 512 iterations), so the
// stop decision itself always uses the exact metric.
IterOutcome iterate_to_fixed_point(
    SpdMatrix x, const std::function<SpdMatrix(const SpdMatrix&)>& map, bool damp_midpoint,
    double tol, int max_iter) {
  IterOutcome out{std::move(x)};
  double first_step_f = -1.0;
  double last_step_f = -1.0;
  double thompson_per_f = -1.0;
  while (out.iterations < max_iter) {
    SpdMatrix fx = map(out.x);
    SpdMatrix next = damp_midpoint ? geo_midpoint_chol(out.x, fx) : std::move(fx);
    ++out.iterations;
    const double step_f = (next.matrix() - out.x.matrix()).frobenius_norm();
    if (first_step_f < 0.0) first_step_f = step_f;
    last_step_f = step_f;
    if (step_f == 0.0) {
      out.x = std::move(next);
      out.last_step = 0.0;
      out.converged = true;
      break;
    }
    const bool check_exact = thompson_per_f < 0.0 || thompson_per_f * step_f <= tol ||
                             out.iterations % 512 == 0;
    if (check_exact) {
      const double step = thompson(out.x, next);
      thompson_per_f = step / step_f;
      if (step <= tol) {
        out.x = std::move(next);
        out.last_step = step;
        out.converged = true;
        break;
      }
    }
    out.x = std::move(next);
  }
  if (!out.converged) out.last_step = thompson(out.x, map(out.x));
  if (out.iterations >= 2 && first_step_f > 0.0 && last_step_f > 0.0)
    out.rate_estimate = std::clamp(
        std::pow(last_step_f / first_step_f, 1.0 / (out.iterations - 1)), 0.0, 1.0 - 1e-16);
  return out;
}

double min_eigenvalue_of_tuple(const MatrixTuple& tuple) {
  double beta = min_eigenvalue(tuple.matrix(0));
  for (int i = 1; i < tuple.size(); ++i) beta = std::min(beta, min_eigenvalue(tuple.matrix(i)));
  return beta;
}

double g_contraction_factor(double t, double alpha, double beta_min) {
  return (1.0 - t) * alpha / ((1.0 - t) * alpha + t * beta_min);
}

SolveReport direct_report(SpdMatrix solution, double fixed_point_residual,
                          double contraction_estimate) {
  SolveReport r{std::move(solution)};
  r.fixed_point_residual = fixed_point_residual;
  r.contraction_estimate = contraction_estimate;
  r.direct = true;
  return r;
}

}  // namespace

SolveReport g_mean(double t, const MatrixTuple& tuple, const SolverOptions& opts) {
  validate(opts);
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterOutOfRange("g_mean: t must lie in [0,1]");
  if (t == 0.0) return direct_report(arithmetic_mean(tuple), 0.0, 0.0);
  const double beta_min = min_eigenvalue_of_tuple(tuple);
  auto map = [&](const SpdMatrix& x) { return g_map(t, tuple, x); };
  if (t == 1.0 || tuple.size() == 1) {
    SpdMatrix sol = t == 1.0 ? harmonic_mean(tuple) : tuple.matrix(0);
    const double fpr = (sol.matrix() - map(sol).matrix()).frobenius_norm();
    return direct_report(std::move(sol), fpr,
                         g_contraction_factor(t, spectral_norm(tuple.matrix(0)), beta_min));
  }

  auto outcome = iterate_to_fixed_point(initial_iterate(tuple, opts), map, t < 0.01, opts.tol,
                                        opts.max_iter);
  SolveReport report{std::move(outcome.x)};
  report.iterations = outcome.iterations;
  report.residual = outcome.last_step;
  report.fixed_point_residual =
      (report.solution.matrix() - map(report.solution).matrix()).frobenius_norm();
  report.contraction_estimate =
      g_contraction_factor(t, spectral_norm(report.solution), beta_min);
  if (!outcome.converged)
    throw MaxIterExceeded("g_mean: no convergence within max_iter", std::move(report));
  // Iteration-independent certificate; 1e-8 at the default tolerance.
  if (resolvent_residual(report.solution, t, tuple) > std::max(1e-8, 100.0 * opts.tol))
    throw NumericsError("g_mean: converged iterate fails the resolvent certificate");
  return report;
}

double resolvent_residual(const SpdMatrix& x, double t, const MatrixTuple& tuple) {
  if (!(t > 0.0 && t <= 1.0)) throw ParameterOutOfRange("resolvent_residual: t must be in (0,1]");
  if (x.dim() != tuple.dim()) throw DimensionMismatch("resolvent_residual");
  const auto pair = sqrt_pair(x);
  const int n = x.dim();
  Matrix sum(n, n);
  for (int i = 0; i < tuple.size(); ++i) {
    Matrix c = (pair.inv_root * tuple.matrix(i).matrix() * pair.inv_root).symmetrized() * t;
    for (int k = 0; k < n; ++k) c(k, k) += 1.0 - t;
    sum += inv_sym(c) * tuple.weights()[i];
  }
  return (sum - Matrix::identity(n)).frobenius_norm();
}

SolveReport power_mean(double t, const MatrixTuple& tuple, const SolverOptions& opts) {
  validate(opts);
  if (t == 0.0 || !(std::abs(t) <= 1.0))
    throw ParameterOutOfRange("power_mean: t must lie in [-1,1] without 0");
  if (t < 0.0) {
    SolveReport inner = power_mean(-t, tuple.inverted(), opts);
    SolveReport report{mat_inv(inner.solution)};
    report.iterations = inner.iterations;
    report.residual = inner.residual;
    report.fixed_point_residual = inner.fixed_point_residual;
    report.contraction_estimate = inner.contraction_estimate;
    report.direct = inner.direct;
    return report;
  }
  auto map = [&](const SpdMatrix& x) {
    Matrix sum(tuple.dim(), tuple.dim());
    for (int i = 0; i < tuple.size(); ++i)
      sum += geo_mean(x, tuple.matrix(i), t).matrix() * tuple.weights()[i];
    return SpdMatrix(sum);
  };
  if (t == 1.0 || tuple.size() == 1) {
    SpdMatrix sol = t == 1.0 ? arithmetic_mean(tuple) : tuple.matrix(0);
    const double fpr = (sol.matrix() - map(sol).matrix()).frobenius_norm();
    return direct_report(std::move(sol), fpr, 0.0);
  }
  auto outcome =
      iterate_to_fixed_point(initial_iterate(tuple, opts), map, false, opts.tol, opts.max_iter);
  SolveReport report{std::move(outcome.x)};
  report.iterations = outcome.iterations;
  report.residual = outcome.last_step;
  report.fixed_point_residual =
      (report.solution.matrix() - map(report.solution).matrix()).frobenius_norm();
  report.contraction_estimate = 1.0 - t;  // a-priori factor of X ↦ Σ wᵢX#ₜAᵢ
  if (!outcome.converged)
    throw MaxIterExceeded("power_mean: no convergence within max_iter", std::move(report));
  return report;
}

double karcher_residual(const SpdMatrix& x, const MatrixTuple& tuple) {
  if (x.dim() != tuple.dim()) throw DimensionMismatch("karcher_residual");
  const auto pair = sqrt_pair(x);
  Matrix sum(x.dim(), x.dim());
  for (int i = 0; i < tuple.size(); ++i)
    sum += mat_log(SpdMatrix((pair.inv_root * tuple.matrix(i).matrix() * pair.inv_root)
                                 .symmetrized())) *
           tuple.weights()[i];
  return sum.frobenius_norm();
}

SolveReport cartan_mean(const MatrixTuple& tuple, const SolverOptions& opts) {
  validate(opts);
  auto tangent_sum = [&](const SpdMatrix& x, const SqrtPair& pair) {
    Matrix sum(x.dim(), x.dim());
    for (int i = 0; i < tuple.size(); ++i)
      sum += mat_log(SpdMatrix((pair.inv_root * tuple.matrix(i).matrix() * pair.inv_root)
                                   .symmetrized())) *
             tuple.weights()[i];
    return sum;
  };
  auto exp_update = [&](const SqrtPair& pair, const Matrix& w, double step) {
    return SpdMatrix(pair.root * mat_exp(w * step).matrix() * pair.root);
  };

  if (tuple.size() == 1) return direct_report(tuple.matrix(0), 0.0, 0.0);

  SpdMatrix x = initial_iterate(tuple, opts);
  const double target = opts.tol * tuple.size();
  auto pair = sqrt_pair(x);
  Matrix w = tangent_sum(x, pair);
  double res = w.frobenius_norm();
  const double first_res = res;
  double last_thompson_step = 0.0;
  int it = 0;
  while (res > target && it < opts.max_iter) {
    ++it;
    // Unit exponential step; halve on residual increase.
    double step = 1.0;
    SpdMatrix prev = x;
    for (;;) {
      SpdMatrix candidate = exp_update(pair, w, step);
      auto cand_pair = sqrt_pair(candidate);
      Matrix cand_w = tangent_sum(candidate, cand_pair);
      const double cand_res = cand_w.frobenius_norm();
      if (cand_res < res || step < 1e-8) {
        x = std::move(candidate);
        pair = std::move(cand_pair);
        w = std::move(cand_w);
        res = cand_res;
        break;
      }
      step *= 0.5;
    }
    last_thompson_step = thompson(prev, x);
  }
  SolveReport report{std::move(x)};
  report.iterations = it;
  report.residual = last_thompson_step;
  report.fixed_point_residual =
      (report.solution.matrix() - exp_update(sqrt_pair(report.solution), w, 1.0).matrix())
          .frobenius_norm();
  if (it >= 2 && first_res > 0.0 && res > 0.0)
    report.contraction_estimate =
        std::clamp(std::pow(res / first_res, 1.0 / (it - 1)), 0.0, 1.0 - 1e-16);
  if (res > target)
    throw MaxIterExceeded("cartan_mean: no convergence within max_iter", std::move(report));
  return report;
}

SolveReport wasserstein_mean(const MatrixTuple& tuple, const SolverOptions& opts) {
  validate(opts);
  auto map = [&](const SpdMatrix& x) {
    const auto pair = sqrt_pair(x);
    Matrix sum(tuple.dim(), tuple.dim());
    for (int i = 0; i < tuple.size(); ++i) {
      auto eig = sym_eig((pair.root * tuple.matrix(i).matrix() * pair.root).symmetrized());
      if (!(eig.min_eigenvalue() > 0.0))
        throw IllConditioned("wasserstein_mean: nonpositive computed eigenvalue");
      sum += spectral_map(eig, [](double l) { return std::sqrt(l); }) * tuple.weights()[i];
    }
    return SpdMatrix(sum);
  };
  if (tuple.size() == 1) return direct_report(tuple.matrix(0), 0.0, 0.0);
  auto outcome =
      iterate_to_fixed_point(initial_iterate(tuple, opts), map, false, opts.tol, opts.max_iter);
  SolveReport report{std::move(outcome.x)};
  report.iterations = outcome.iterations;
  report.residual = outcome.last_step;
  report.fixed_point_residual =
      (report.solution.matrix() - map(report.solution).matrix()).frobenius_norm();
  report.contraction_estimate = outcome.rate_estimate;
  if (!outcome.converged)
    throw MaxIterExceeded("wasserstein_mean: no convergence within max_iter", std::move(report));
  return report;
}

SolveReport renyi_power_mean(double t, double z, const MatrixTuple& tuple,
                             const SolverOptions& opts) {
  validate(opts);
  if (!(t > 0.0 && t <= z && z < 1.0))
    throw ParameterOutOfRange("renyi_power_mean: need 0 < t <= z < 1");
  if (tuple.size() == 1) return direct_report(tuple.matrix(0), 0.0, 0.0);
  std::vector<SpdMatrix> inner;
  inner.reserve(tuple.size());
  for (int i = 0; i < tuple.size(); ++i)
    inner.push_back(mat_pow(tuple.matrix(i), (1.0 - t) / z));
  auto map = [&](const SpdMatrix& x) {
    const SpdMatrix xp = mat_pow(x, t / (2.0 * z));
    Matrix sum(tuple.dim(), tuple.dim());
    for (int i = 0; i < tuple.size(); ++i) {
      const SpdMatrix q(xp.matrix() * inner[i].matrix() * xp.matrix());
      sum += mat_pow(q, z).matrix() * tuple.weights()[i];
    }
    return SpdMatrix(sum);
  };
  auto outcome =
      iterate_to_fixed_point(initial_iterate(tuple, opts), map, false, opts.tol, opts.max_iter);
  SolveReport report{std::move(outcome.x)};
  report.iterations = outcome.iterations;
  report.residual = outcome.last_step;
  report.fixed_point_residual =
      (report.solution.matrix() - map(report.solution).matrix()).frobenius_norm();
  report.contraction_estimate = outcome.rate_estimate;
  if (!outcome.converged)
    throw MaxIterExceeded("renyi_power_mean: no convergence within max_iter", std::move(report));
  return report;
}

SpdMatrix closed_form_two(double t, double w1, double w2, const SpdMatrix& a,
                          const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("closed_form_two");
  if (!(t > 0.0 && t < 1.0)) throw ParameterOutOfRange("closed_form_two: t must lie in (0,1)");
  if (!(w1 > 0.0 && w2 > 0.0 && std::abs(w1 + w2 - 1.0) <= 1e-12))
    throw PreconditionViolated("closed_form_two: weights must be positive and sum to 1");
  if (!((w1 < t && t < w2) || (w2 < t && t < w1)))
    throw PreconditionViolated("closed_form_two: t must lie strictly between w1 and w2");
  const Matrix lhs = a.matrix() * (t - w1);
  const Matrix rhs = b.matrix() * (w2 - t);
  const double scale = std::max(lhs.frobenius_norm(), rhs.frobenius_norm());
  if ((lhs - rhs).frobenius_norm() > 1e-10 * scale)
    throw PreconditionViolated("closed_form_two: (t-w1)A = (w2-t)B does not hold");
  const double coeff = std::sqrt(t * (t - w1) / ((1.0 - t) * (w2 - t)));
  return SpdMatrix(a.matrix() * coeff);
}

std::vector<std::pair<double, double>> lie_trotter_limit(const MatrixTuple& tuple, double t,
                                                         const std::vector<double>& p_grid,
                                                         const SolverOptions& opts) {
  for (double p : p_grid)
    if (!(p > 0.0 && p <= 1.0))
      throw ParameterOutOfRange("lie_trotter_limit: p values must lie in (0,1]");
  Matrix log_sum(tuple.dim(), tuple.dim());
  for (int i = 0; i < tuple.size(); ++i)
    log_sum += mat_log(tuple.matrix(i)) * tuple.weights()[i];
  const SpdMatrix log_euclidean = mat_exp(log_sum);
  std::vector<std::pair<double, double>> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    const SpdMatrix g = g_mean(t, tuple.powered(p), opts).solution;
    out.emplace_back(p, thompson(mat_pow(g, 1.0 / p), log_euclidean));
  }
  return out;
}

std::pair<double, double> contraction_check(double t, const MatrixTuple& tuple,
                                            const SpdMatrix& x, const SpdMatrix& y) {
  if (!(t > 0.0 && t < 1.0)) throw ParameterOutOfRange("contraction_check: t must lie in (0,1)");
  if (x.dim() != tuple.dim() || y.dim() != tuple.dim())
    throw DimensionMismatch("contraction_check");
  const double lhs = thompson(g_map(t, tuple, x), g_map(t, tuple, y));
  const double alpha = std::max(spectral_norm(x), spectral_norm(y));
  const double q = g_contraction_factor(t, alpha, min_eigenvalue_of_tuple(tuple));
  return {lhs, q * thompson(x, y)};
}

}  // namespace spdmean
