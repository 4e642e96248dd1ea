#include <cmath>

#include "doctest.h"
#include "spdmean/errors.hpp"
#include "spdmean/metrics.hpp"
#include "spdmean/solvers.hpp"
#include "spdmean/testkit.hpp"

using namespace spdmean;

namespace {

MatrixTuple scalar_pair_1_4() {
  return MatrixTuple({SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4})},
                     WeightVector::uniform(2));
}

MatrixTuple reference_triple() {
  return MatrixTuple({SpdMatrix(Matrix{{2, -1}, {-1, 2}}), SpdMatrix(Matrix{{3, -2}, {-2, 3}}),
                      SpdMatrix(Matrix{{2, 1}, {1, 2}})},
                     WeightVector::uniform(3));
}

// Independent scalar oracle: bisection on f(x) - x over [harmonic, arithmetic].
double scalar_g_oracle(double t, const std::vector<double>& a, const std::vector<double>& w) {
  const auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] / ((1.0 - t) * x + t * a[i]);
    return 1.0 / s;
  };
  double hi = 0.0, hsum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    hi += w[i] * a[i];
    hsum += w[i] / a[i];
  }
  double lo = (1.0 / hsum) * (1.0 - 1e-12);
  hi *= 1.0 + 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("g_mean on constant tuples is idempotent") {
  testkit::Rng rng(101);
  const SpdMatrix a = testkit::random_spd(3, 100.0, 1.0, rng);
  const MatrixTuple t({a, a, a, a}, testkit::random_weights(4, rng));
  for (double tee : {0.05, 0.3, 0.7, 1.0})
    CHECK(thompson(g_mean(tee, t).solution, a) < 1e-10);
}

TEST_CASE("g_mean scalar midpoint equals the geometric mean") {
  const auto report = g_mean(0.5, scalar_pair_1_4());
  CHECK(report.solution(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.residual <= 1e-12);
  CHECK(report.fixed_point_residual < 1e-11);
  CHECK(report.contraction_estimate < 1.0);
  CHECK_FALSE(report.direct);
}

TEST_CASE("g_mean reproduces the reference 2x2 value") {
  const auto report = g_mean(0.5, reference_triple());
  CHECK(report.solution(0, 0) == doctest::Approx(1.96124391).epsilon(1e-7));
  CHECK(report.solution(0, 1) == doctest::Approx(-0.53074303).epsilon(1e-7));
  CHECK(report.solution(1, 1) == doctest::Approx(1.96124391).epsilon(1e-7));
}

TEST_CASE("g_mean endpoint conventions") {
  const MatrixTuple t = scalar_pair_1_4();
  const auto harmonic = g_mean(1.0, t);
  CHECK(harmonic.solution(0, 0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(harmonic.direct);
  const auto arithmetic = g_mean(0.0, t);
  CHECK(arithmetic.solution(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(arithmetic.direct);
  CHECK(arithmetic.contraction_estimate < 1.0);
  CHECK_THROWS_AS(g_mean(1.5, t), ParameterOutOfRange);
}

TEST_CASE("g_mean single-matrix tuples return the matrix") {
  testkit::Rng rng(103);
  const SpdMatrix a = testkit::random_spd(4, 100.0, 1.0, rng);
  const MatrixTuple t({a}, WeightVector::uniform(1));
  const auto report = g_mean(0.37, t);
  CHECK(report.direct);
  CHECK((report.solution.matrix() - a.matrix()).max_abs() == 0.0);
}

TEST_CASE("g_mean raises MaxIterExceeded with the best iterate attached") {
  SolverOptions opts;
  opts.max_iter = 2;
  try {
    g_mean(0.5, reference_triple(), opts);
    FAIL("expected MaxIterExceeded");
  } catch (const MaxIterExceeded& e) {
    CHECK(e.best_iterate().iterations == 2);
    CHECK(e.best_iterate().residual > 0.0);
    CHECK(e.best_iterate().solution.dim() == 2);
  }
}

TEST_CASE("g_mean init choices land on the same fixed point") {
  testkit::Rng rng(107);
  const int n = 3;
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(3, 100.0, 1.0, rng));
  const MatrixTuple t(std::move(mats), testkit::random_weights(n, rng));
  SolverOptions harmonic;
  harmonic.init = SolverOptions::Init::HarmonicMean;
  SolverOptions identity;
  identity.init = SolverOptions::Init::Identity;
  SolverOptions custom;
  custom.init = SolverOptions::Init::Custom;
  custom.custom_init = testkit::random_spd(3, 10.0, 1.0, rng);
  const SpdMatrix base = g_mean(0.4, t).solution;
  CHECK(thompson(base, g_mean(0.4, t, harmonic).solution) < 1e-10);
  CHECK(thompson(base, g_mean(0.4, t, identity).solution) < 1e-10);
  CHECK(thompson(base, g_mean(0.4, t, custom).solution) < 1e-10);
}

TEST_CASE("damped small-t path stays on the fixed point") {
  // t below the damping threshold: certificate must still hold.
  testkit::Rng rng(109);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(testkit::random_spd(3, 4.0, 1.0, rng));
  const MatrixTuple t(std::move(mats), WeightVector::uniform(3));
  SolverOptions opts;
  opts.tol = 1e-11;
  opts.max_iter = 2000000;
  const auto report = g_mean(0.005, t, opts);
  CHECK(resolvent_residual(report.solution, 0.005, t) < 1e-8);
  CHECK(report.contraction_estimate < 1.0);
}

TEST_CASE("scalar oracle equivalence across the t grid") {
  testkit::Rng rng(113);
  SolverOptions opts;
  opts.tol = 2.5e-15;
  opts.max_iter = 200000;
  for (int it = 0; it < 25; ++it) {
    const int n = rng.uniform_int(1, 6);
    std::vector<double> a(n);
    for (double& x : a) x = rng.uniform(0.2, 4.0);
    const WeightVector w = testkit::random_weights(n, rng);
    std::vector<SpdMatrix> mats;
    for (double x : a) mats.push_back(SpdMatrix::diagonal({x}));
    const MatrixTuple t(std::move(mats), w);
    for (double tee : {0.1, 0.4, 0.7, 1.0}) {
      const double got = g_mean(tee, t, opts).solution(0, 0);
      CHECK(std::abs(got - scalar_g_oracle(tee, a, w.values())) < 1e-12);
    }
  }
}

TEST_CASE("resolvent residual certifies solutions and flags non-solutions") {
  const MatrixTuple t = scalar_pair_1_4();
  const auto report = g_mean(0.5, t);
  CHECK(resolvent_residual(report.solution, 0.5, t) < 1e-8);
  CHECK(resolvent_residual(SpdMatrix::diagonal({2.0}), 0.5, t) < 1e-14);  // exact fixed point
  CHECK(resolvent_residual(SpdMatrix::diagonal({1.0}), 0.5, t) > 1e-3);
  CHECK(resolvent_residual(SpdMatrix::diagonal({4.0}), 0.5, t) > 1e-3);
  CHECK_THROWS_AS(resolvent_residual(report.solution, 0.0, t), ParameterOutOfRange);
}

TEST_CASE("power mean endpoints and scalar values") {
  const MatrixTuple t = scalar_pair_1_4();
  CHECK(power_mean(1.0, t).solution(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(power_mean(-1.0, t).solution(0, 0) == doctest::Approx(1.6).epsilon(1e-13));
  // x^t = sum w a^t at t = 1/2: ((1+2)/2)^2
  CHECK(power_mean(0.5, t).solution(0, 0) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK_THROWS_AS(power_mean(0.0, t), ParameterOutOfRange);
  CHECK_THROWS_AS(power_mean(1.2, t), ParameterOutOfRange);
}

TEST_CASE("power mean negative orders via tuple inversion") {
  testkit::Rng rng(127);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(testkit::random_spd(3, 100.0, 1.0, rng));
  const MatrixTuple t(std::move(mats), testkit::random_weights(3, rng));
  const SpdMatrix direct = power_mean(-0.5, t).solution;
  const SpdMatrix via_inverse = mat_inv(power_mean(0.5, t.inverted()).solution);
  CHECK(thompson(direct, via_inverse) < 1e-12);
}

TEST_CASE("cartan mean scalar and reference values") {
  const MatrixTuple t = scalar_pair_1_4();
  CHECK(cartan_mean(t).solution(0, 0) == doctest::Approx(2.0).epsilon(1e-11));

  const auto report = cartan_mean(reference_triple());
  CHECK(report.solution(0, 0) == doctest::Approx(1.95423082).epsilon(1e-7));
  CHECK(report.solution(0, 1) == doctest::Approx(-0.51198125).epsilon(1e-7));
  CHECK(karcher_residual(report.solution, reference_triple()) <= 3e-12);
}

TEST_CASE("cartan mean is idempotent") {
  testkit::Rng rng(131);
  const SpdMatrix a = testkit::random_spd(4, 100.0, 1.0, rng);
  const MatrixTuple t({a, a}, WeightVector::uniform(2));
  CHECK(thompson(cartan_mean(t).solution, a) < 1e-10);
}

TEST_CASE("wasserstein mean fixed points") {
  testkit::Rng rng(137);
  const SpdMatrix a = testkit::random_spd(3, 100.0, 1.0, rng);
  CHECK(thompson(wasserstein_mean(MatrixTuple({a, a}, WeightVector::uniform(2))).solution, a) <
        1e-10);
  const MatrixTuple scalars = scalar_pair_1_4();
  CHECK(wasserstein_mean(scalars).solution(0, 0) == doctest::Approx(2.25).epsilon(1e-11));
  const MatrixTuple commuting({SpdMatrix::diagonal({1, 4}), SpdMatrix::diagonal({4, 1})},
                              WeightVector::uniform(2));
  const Matrix w = wasserstein_mean(commuting).solution.matrix();
  CHECK(w(0, 0) == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(w(1, 1) == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(std::abs(w(0, 1)) < 1e-10);
}

TEST_CASE("renyi power mean parameter checks and values") {
  const MatrixTuple t = scalar_pair_1_4();
  CHECK_THROWS_AS(renyi_power_mean(0.0, 0.5, t), ParameterOutOfRange);
  CHECK_THROWS_AS(renyi_power_mean(0.6, 0.5, t), ParameterOutOfRange);
  CHECK_THROWS_AS(renyi_power_mean(0.5, 1.0, t), ParameterOutOfRange);

  // scalar identity x^{1-t} = sum w_j a_j^{1-t}
  const double expected = std::pow(0.5 + 0.5 * std::pow(4.0, 0.75), 4.0 / 3.0);
  CHECK(renyi_power_mean(0.25, 0.5, t).solution(0, 0) ==
        doctest::Approx(expected).epsilon(1e-11));
  CHECK(expected == doctest::Approx(2.3768).epsilon(1e-4));
}

TEST_CASE("renyi at t = z = 1/2 meets the wasserstein mean") {
  testkit::Rng rng(139);
  for (int it = 0; it < 10; ++it) {
    const int dim = rng.uniform_int(1, 5);
    const int n = rng.uniform_int(2, 4);
    std::vector<SpdMatrix> mats;
    for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(dim, 100.0, 1.0, rng));
    const MatrixTuple t(std::move(mats), testkit::random_weights(n, rng));
    CHECK(thompson(renyi_power_mean(0.5, 0.5, t).solution, wasserstein_mean(t).solution) < 1e-8);
  }
}

TEST_CASE("closed form for proportional pairs") {
  SUBCASE("scalar example") {
    const SpdMatrix a = SpdMatrix::diagonal({3});
    const SpdMatrix b = SpdMatrix::diagonal({1});
    const SpdMatrix g = closed_form_two(0.4, 0.3, 0.7, a, b);
    CHECK(g(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // solver agreement
    const MatrixTuple t({a, b}, WeightVector({0.3, 0.7}));
    CHECK(thompson(g, g_mean(0.4, t).solution) < 1e-8);
  }
  SUBCASE("matrix instance B = A/3") {
    testkit::Rng rng(149);
    const SpdMatrix a = testkit::random_spd(3, 100.0, 1.0, rng);
    const SpdMatrix b(a.matrix() * (1.0 / 3.0));
    const SpdMatrix g = closed_form_two(0.4, 0.3, 0.7, a, b);
    CHECK((g.matrix() - a.matrix() * (std::sqrt(2.0) / 3.0)).max_abs() < 1e-12);
    const MatrixTuple t({a, b}, WeightVector({0.3, 0.7}));
    CHECK(thompson(g, g_mean(0.4, t).solution) < 1e-8);
  }
  SUBCASE("precondition failures") {
    const SpdMatrix a = SpdMatrix::diagonal({3});
    const SpdMatrix b = SpdMatrix::diagonal({2});
    CHECK_THROWS_AS(closed_form_two(0.4, 0.3, 0.7, a, b), PreconditionViolated);
    CHECK_THROWS_AS(closed_form_two(0.9, 0.3, 0.7, a, SpdMatrix::diagonal({1})),
                    PreconditionViolated);
    CHECK_THROWS_AS(closed_form_two(0.4, 0.3, 0.6, a, b), PreconditionViolated);
  }
}

TEST_CASE("lie-trotter distances collapse for commuting tuples") {
  const MatrixTuple commuting({SpdMatrix::diagonal({1, 4}), SpdMatrix::diagonal({4, 1})},
                              WeightVector::uniform(2));
  for (const auto& [p, dist] : lie_trotter_limit(commuting, 0.5, {1e-1, 1e-2, 1e-3})) {
    (void)p;
    CHECK(dist < 1e-8);
  }
  const SpdMatrix a = SpdMatrix::diagonal({2, 3});
  const MatrixTuple constant({a, a}, WeightVector::uniform(2));
  for (const auto& [p, dist] : lie_trotter_limit(constant, 0.3, {1.0, 0.5})) {
    (void)p;
    CHECK(dist < 1e-10);
  }
}

TEST_CASE("lie-trotter distances decrease for non-commuting pairs") {
  testkit::Rng rng(151);
  const SpdMatrix a = testkit::random_spd(3, 4.0, 1.0, rng);
  const SpdMatrix b = testkit::random_spd(3, 4.0, 1.0, rng);
  const MatrixTuple t({a, b}, WeightVector::uniform(2));
  const auto rows = lie_trotter_limit(t, 0.5, {1e-1, 1e-2, 1e-3});
  CHECK(rows[0].second > rows[1].second);
  CHECK(rows[1].second > rows[2].second);
  CHECK(rows[2].second < 1e-3);
  CHECK_THROWS_AS(lie_trotter_limit(t, 0.5, {0.0}), ParameterOutOfRange);
}

TEST_CASE("contraction certificate") {
  const MatrixTuple t = scalar_pair_1_4();
  SUBCASE("equal arguments give zero on both sides") {
    const SpdMatrix x = SpdMatrix::diagonal({2});
    const auto [lhs, bound] = contraction_check(0.5, t, x, x);
    CHECK(lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(bound == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("scalar instance computed by hand") {
    const auto [lhs, bound] =
        contraction_check(0.5, t, SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4}));
    // f(1) = 1/0.7, f(4) = 1/0.325; q = 0.8
    CHECK(lhs == doctest::Approx(std::log(0.7 / 0.325)).epsilon(1e-12));
    CHECK(bound == doctest::Approx(0.8 * std::log(4.0)).epsilon(1e-12));
    CHECK(lhs <= bound + 1e-10);
  }
  SUBCASE("bound collapses as t approaches 1") {
    const auto [lhs, bound] =
        contraction_check(0.999, t, SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4}));
    CHECK(bound < 0.006);
    CHECK(lhs <= bound + 1e-10);
  }
  SUBCASE("random instances respect the bound") {
    testkit::Rng rng(157);
    for (int it = 0; it < 30; ++it) {
      const int dim = rng.uniform_int(1, 6);
      const int n = rng.uniform_int(1, 4);
      std::vector<SpdMatrix> mats;
      for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(dim, 100.0, 1.0, rng));
      const MatrixTuple tuple(std::move(mats), testkit::random_weights(n, rng));
      const SpdMatrix x = testkit::random_spd(dim, 100.0, 1.0, rng);
      const SpdMatrix y = testkit::random_spd(dim, 100.0, 1.0, rng);
      const double tee = rng.uniform(0.05, 0.95);
      const auto [lhs, bound] = contraction_check(tee, tuple, x, y);
      CHECK(lhs <= bound + 1e-10);
    }
  }
}

TEST_CASE("solver reports carry a valid contraction estimate") {
  testkit::Rng rng(163);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 4; ++i) mats.push_back(testkit::random_spd(3, 100.0, 1.0, rng));
  const MatrixTuple t(std::move(mats), testkit::random_weights(4, rng));
  for (double tee : {0.1, 0.5, 0.9, 1.0}) {
    const auto report = g_mean(tee, t);
    CHECK(report.contraction_estimate >= 0.0);
    CHECK(report.contraction_estimate < 1.0);
    CHECK(resolvent_residual(report.solution, tee, t) <= 1e-8);
  }
  CHECK(power_mean(0.5, t).contraction_estimate == doctest::Approx(0.5));
  CHECK(wasserstein_mean(t).contraction_estimate < 1.0);
  CHECK(cartan_mean(t).contraction_estimate < 1.0);
}
