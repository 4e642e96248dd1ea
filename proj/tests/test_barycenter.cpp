#include <cmath>

#include "doctest.h"
#include "spdmean/barycenter.hpp"
#include "spdmean/errors.hpp"
#include "spdmean/testkit.hpp"

using namespace spdmean;

namespace {

BarycenterProblem scalar_problem(double alpha) {
  return BarycenterProblem(Alpha(alpha),
                           {SpdMatrix::diagonal({1}), SpdMatrix::diagonal({4})});
}

}  // namespace

TEST_CASE("problem construction validates alpha and shapes") {
  CHECK_THROWS_AS(BarycenterProblem(Alpha(1.0), {SpdMatrix::identity(2)}), ParameterOutOfRange);
  CHECK_THROWS_AS(
      BarycenterProblem(Alpha(0.0), {SpdMatrix::identity(2), SpdMatrix::identity(3)}),
      DimensionMismatch);
}

TEST_CASE("phi value on scalar instances") {
  const BarycenterProblem p = scalar_problem(0.0);
  // D0(1|2) + D0(4|2) = 4 log(1.5/sqrt 2) + 4 log(3/sqrt 8)
  const double expected = 4.0 * std::log(1.5 / std::sqrt(2.0)) + 4.0 * std::log(3.0 / std::sqrt(8.0));
  CHECK(phi_value(p, SpdMatrix::diagonal({2})) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(0.47113214262553384).epsilon(1e-15));
  // at X = A1 only the second term survives: 4 log(2.5/2)
  CHECK(phi_value(p, SpdMatrix::diagonal({1})) ==
        doctest::Approx(4.0 * std::log(1.25)).epsilon(1e-13));
  // the minimizer value is below the off-minimizer value
  CHECK(phi_value(p, SpdMatrix::diagonal({2})) < phi_value(p, SpdMatrix::diagonal({1})));
}

TEST_CASE("phi value vanishes exactly on constant problems") {
  testkit::Rng rng(211);
  const SpdMatrix a = testkit::random_spd(3, 100.0, 1.0, rng);
  const BarycenterProblem p(Alpha(0.3), {a, a, a});
  CHECK(phi_value(p, a) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phi gradient on scalar instances") {
  const BarycenterProblem p = scalar_problem(0.0);
  // alpha = 0, X = 1: 2[1/(0.5+0.5) + 1/(0.5·4+0.5) - 2] = -1.2
  CHECK(phi_gradient(p, SpdMatrix::diagonal({1}))(0, 0) ==
        doctest::Approx(-1.2).epsilon(1e-14));
  // vanishes at the two-point right mean sqrt(1·4) = 2
  CHECK(std::abs(phi_gradient(p, SpdMatrix::diagonal({2}))(0, 0)) < 1e-12);
}

TEST_CASE("phi gradient vanishes at the constant minimizer") {
  testkit::Rng rng(223);
  const SpdMatrix a = testkit::random_spd(4, 100.0, 1.0, rng);
  const BarycenterProblem p(Alpha(-0.4), {a, a});
  CHECK(phi_gradient(p, a).frobenius_norm() < 1e-12);
}

TEST_CASE("right mean equals the two-point geometric mean at alpha 0") {
  const auto report = right_mean(scalar_problem(0.0));
  CHECK(report.solution(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("right mean reproduces the reference triple at alpha 0") {
  const BarycenterProblem p(Alpha(0.0),
                            {SpdMatrix(Matrix{{2, -1}, {-1, 2}}), SpdMatrix(Matrix{{3, -2}, {-2, 3}}),
                             SpdMatrix(Matrix{{2, 1}, {1, 2}})});
  const auto report = right_mean(p);
  CHECK(report.solution(0, 0) == doctest::Approx(1.96124391).epsilon(1e-7));
  CHECK(report.solution(0, 1) == doctest::Approx(-0.53074303).epsilon(1e-7));
}

TEST_CASE("right mean is the g_mean code path, bitwise") {
  testkit::Rng rng(227);
  for (double alpha : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    std::vector<SpdMatrix> mats;
    for (int i = 0; i < 3; ++i) mats.push_back(testkit::random_spd(3, 100.0, 1.0, rng));
    const BarycenterProblem p(Alpha(alpha), mats);
    const SpdMatrix via_bary = right_mean(p).solution;
    const SpdMatrix via_g = g_mean(0.5 * (1.0 - alpha), p.tuple()).solution;
    CHECK((via_bary.matrix() - via_g.matrix()).max_abs() == 0.0);
  }
}

TEST_CASE("gradient norm certifies the right mean") {
  testkit::Rng rng(229);
  for (int it = 0; it < 20; ++it) {
    const int dim = rng.uniform_int(1, 5);
    const int n = rng.uniform_int(1, 5);
    std::vector<SpdMatrix> mats;
    for (int i = 0; i < n; ++i) mats.push_back(testkit::random_spd(dim, 100.0, 1.0, rng));
    const double alpha = rng.uniform(-0.9, 0.9);
    const BarycenterProblem p(Alpha(alpha), std::move(mats));
    const SpdMatrix x = right_mean(p).solution;
    CHECK(phi_gradient(p, x).frobenius_norm() <= 1e-8 * p.size());
  }
}

TEST_CASE("objective grows in every direction around the right mean") {
  testkit::Rng rng(233);
  std::vector<SpdMatrix> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(testkit::random_spd(3, 50.0, 1.0, rng));
  const BarycenterProblem p(Alpha(0.5), std::move(mats));
  const SpdMatrix x = right_mean(p).solution;
  const double base = phi_value(p, x);
  const double h = 1e-3 * min_eigenvalue(x);
  for (int k = 0; k < 20; ++k) {
    const Matrix dir = testkit::random_symmetric(3, rng);
    CHECK(phi_value(p, SpdMatrix(x.matrix() + dir * h)) >= base - 1e-12);
  }
}
