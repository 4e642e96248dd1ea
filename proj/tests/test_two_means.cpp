#include <cmath>

#include "doctest.h"
#include "spdmean/errors.hpp"
#include "spdmean/metrics.hpp"
#include "spdmean/testkit.hpp"
#include "spdmean/two_means.hpp"

using namespace spdmean;

TEST_CASE("weight vectors renormalize and reject nonpositive entries") {
  const WeightVector w({2.0, 2.0});
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-16));
  CHECK_THROWS_AS(WeightVector({0.5, 0.0}), ParameterOutOfRange);
  CHECK_THROWS_AS(WeightVector({0.5, -0.1}), ParameterOutOfRange);
  CHECK(WeightVector::uniform(1)[0] == 1.0);
}

TEST_CASE("matrix tuples enforce shape agreement") {
  const SpdMatrix a = SpdMatrix::identity(2);
  CHECK_THROWS_AS(MatrixTuple({a, SpdMatrix::identity(3)}, WeightVector::uniform(2)),
                  DimensionMismatch);
  CHECK_THROWS_AS(MatrixTuple({a}, WeightVector::uniform(2)), DimensionMismatch);
}

TEST_CASE("geodesic endpoints and midpoints") {
  testkit::Rng rng(47);
  const SpdMatrix a = testkit::random_spd(3, 100.0, 1.0, rng);
  const SpdMatrix b = testkit::random_spd(3, 100.0, 1.0, rng);
  CHECK((geo_mean(a, b, 0.0).matrix() - a.matrix()).max_abs() == 0.0);
  CHECK((geo_mean(a, b, 1.0).matrix() - b.matrix()).max_abs() == 0.0);
  // identity base point: I #_{1/2} B = B^{1/2}
  const Matrix half = geo_mean(SpdMatrix::identity(3), b, 0.5).matrix();
  CHECK((half - mat_sqrt(b).matrix()).frobenius_norm() / half.frobenius_norm() < 1e-12);
  // commuting diagonals: entrywise geometric mean
  const Matrix mid = geo_mean(SpdMatrix::diagonal({1, 4}), SpdMatrix::diagonal({4, 1}), 0.5).matrix();
  CHECK((mid - Matrix{{2, 0}, {0, 2}}).max_abs() < 1e-13);
  CHECK_THROWS_AS(geo_mean(a, b, 1.5), ParameterOutOfRange);
}

TEST_CASE("riccati characterization of the midpoint") {
  testkit::Rng rng(53);
  for (int it = 0; it < 40; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 1e3, 1.0, rng);
    const SpdMatrix b = testkit::random_spd(dim, 1e3, 1.0, rng);
    const SpdMatrix x = geo_mean(a, b, 0.5);
    const Matrix lhs = (x.matrix() * mat_inv(a).matrix() * x.matrix()).symmetrized();
    CHECK((lhs - b.matrix()).frobenius_norm() / b.matrix().frobenius_norm() < 1e-9);
  }
}

TEST_CASE("geodesic self-duality") {
  testkit::Rng rng(59);
  for (int it = 0; it < 40; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 1e3, 1.0, rng);
    const SpdMatrix b = testkit::random_spd(dim, 1e3, 1.0, rng);
    const double t = rng.uniform();
    const Matrix lhs = mat_inv(geo_mean(a, b, t)).matrix();
    const Matrix rhs = geo_mean(mat_inv(a), mat_inv(b), t).matrix();
    CHECK((lhs - rhs).frobenius_norm() / rhs.frobenius_norm() < 1e-9);
  }
}

TEST_CASE("thompson convexity along geodesics") {
  testkit::Rng rng(61);
  for (int it = 0; it < 40; ++it) {
    const int dim = rng.uniform_int(1, 6);
    const SpdMatrix a = testkit::random_spd(dim, 100.0, 1.0, rng);
    const SpdMatrix b = testkit::random_spd(dim, 100.0, 1.0, rng);
    const SpdMatrix c = testkit::random_spd(dim, 100.0, 1.0, rng);
    const SpdMatrix d = testkit::random_spd(dim, 100.0, 1.0, rng);
    const double t = rng.uniform();
    CHECK(thompson(geo_mean(a, b, t), geo_mean(c, d, t)) <=
          (1.0 - t) * thompson(a, c) + t * thompson(b, d) + 1e-10);
  }
}

TEST_CASE("arithmetic mean examples") {
  const MatrixTuple constant({SpdMatrix::diagonal({2, 3}), SpdMatrix::diagonal({2, 3})},
                             WeightVector({0.3, 0.7}));
  CHECK((arithmetic_mean(constant).matrix() - Matrix{{2, 0}, {0, 3}}).max_abs() < 1e-15);

  const MatrixTuple scalars({SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4})},
                            WeightVector::uniform(2));
  CHECK(arithmetic_mean(scalars)(0, 0) == doctest::Approx(2.5).epsilon(1e-15));

  const MatrixTuple weighted({SpdMatrix::diagonal({4}), SpdMatrix::diagonal({8.0 / 3})},
                             WeightVector({0.25, 0.75}));
  CHECK(arithmetic_mean(weighted)(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("harmonic mean examples") {
  const SpdMatrix a = SpdMatrix::diagonal({2, 5});
  const MatrixTuple constant({a, a, a}, WeightVector::uniform(3));
  CHECK((harmonic_mean(constant).matrix() - a.matrix()).max_abs() < 1e-14);

  const MatrixTuple scalars({SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4})},
                            WeightVector::uniform(2));
  CHECK(harmonic_mean(scalars)(0, 0) == doctest::Approx(1.6).epsilon(1e-15));

  const MatrixTuple commuting({SpdMatrix::diagonal({1, 4}), SpdMatrix::diagonal({4, 1})},
                              WeightVector::uniform(2));
  CHECK((harmonic_mean(commuting).matrix() - Matrix{{1.6, 0}, {0, 1.6}}).max_abs() < 1e-14);
}

TEST_CASE("harmonic below arithmetic in the Loewner order") {
  testkit::Rng rng(67);
  for (int it = 0; it < 40; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const int n = rng.uniform_int(1, 6);
    std::vector<SpdMatrix> mats;
    for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(dim, 1e3, 1.0, rng));
    const MatrixTuple t(std::move(mats), testkit::random_weights(n, rng));
    CHECK(loewner_leq(harmonic_mean(t), arithmetic_mean(t), 1e-10));
  }
}

TEST_CASE("operator norm interpolation along geodesics") {
  testkit::Rng rng(71);
  for (int it = 0; it < 40; ++it) {
    const int dim = rng.uniform_int(1, 6);
    const SpdMatrix a = testkit::random_spd(dim, 1e3, 1.0, rng);
    const SpdMatrix b = testkit::random_spd(dim, 1e3, 1.0, rng);
    const double t = rng.uniform();
    CHECK(spectral_norm(geo_mean(a, b, t)) <=
          std::pow(spectral_norm(a), 1.0 - t) * std::pow(spectral_norm(b), t) + 1e-10);
  }
}

TEST_CASE("tuple helpers act elementwise") {
  testkit::Rng rng(73);
  const SpdMatrix a = testkit::random_spd(2, 10.0, 1.0, rng);
  const SpdMatrix b = testkit::random_spd(2, 10.0, 1.0, rng);
  const MatrixTuple t({a, b}, WeightVector({0.25, 0.75}));

  const MatrixTuple inv = t.inverted();
  CHECK((inv.matrix(0).matrix() - mat_inv(a).matrix()).max_abs() == 0.0);

  const MatrixTuple perm = t.permuted({1, 0});
  CHECK((perm.matrix(0).matrix() - b.matrix()).max_abs() == 0.0);
  CHECK(perm.weights()[0] == doctest::Approx(0.75));

  const MatrixTuple scaled = t.scaled(2.0);
  CHECK((scaled.matrix(1).matrix() - b.matrix() * 2.0).max_abs() < 1e-15);
}
