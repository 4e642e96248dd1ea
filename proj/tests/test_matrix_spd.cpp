#include <cmath>

#include "doctest.h"
#include "spdmean/errors.hpp"
#include "spdmean/spd.hpp"
#include "spdmean/testkit.hpp"

using namespace spdmean;

namespace {

double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).frobenius_norm() / b.frobenius_norm();
}

}  // namespace

TEST_CASE("sym_eig diagonal and identity cases") {
  auto eye = sym_eig(Matrix::identity(2));
  CHECK(eye.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eye.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

  auto diag = sym_eig(Matrix{{1, 0}, {0, 4}});
  CHECK(diag.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(diag.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eig tridiagonal 2x2 by characteristic polynomial") {
  // (2-l)^2 - 1 = 0 -> l in {3, 1}
  auto eig = sym_eig(Matrix{{2, -1}, {-1, 2}});
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sym_eig basis is orthogonal and reconstructs") {
  testkit::Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 1e6, 1.0, rng);
    const auto eig = sym_eig(a);
    const Matrix gram = eig.basis.transposed() * eig.basis;
    CHECK((gram - Matrix::identity(dim)).max_abs() < 1e-12);
    CHECK(rel_err(eig.reconstruct(), a.matrix()) < 1e-10);
    for (std::size_t k = 0; k + 1 < eig.eigenvalues.size(); ++k)
      CHECK(eig.eigenvalues[k] >= eig.eigenvalues[k + 1]);
  }
}

TEST_CASE("SpdMatrix rejects non-positive input") {
  CHECK_THROWS_AS(SpdMatrix(Matrix{{1, 0}, {0, -1}}), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(Matrix{{0, 0}, {0, 0}}), NotPositiveDefinite);
  CHECK_THROWS_AS(SpdMatrix(Matrix(2, 3)), DimensionMismatch);
}

TEST_CASE("SpdMatrix symmetrizes its input") {
  const SpdMatrix a(Matrix{{2, 0.1}, {0.3, 2}});
  CHECK(a(0, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(a(0, 1) == a(1, 0));
}

TEST_CASE("mat functions on simple spectra") {
  CHECK(mat_log(SpdMatrix::identity(2)).max_abs() < 1e-14);
  const SpdMatrix d14 = SpdMatrix::diagonal({1, 4});
  CHECK(rel_err(mat_sqrt(d14).matrix(), Matrix{{1, 0}, {0, 2}}) < 1e-14);
  const SpdMatrix nine = SpdMatrix::diagonal({9});
  CHECK(mat_pow(nine, -0.5)(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("log/exp round-trip on random matrices") {
  testkit::Rng rng(11);
  for (int it = 0; it < 100; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 1e6, rng.uniform(0.5, 2.0), rng);
    CHECK(rel_err(mat_exp(mat_log(a)).matrix(), a.matrix()) < 1e-8);
  }
}

TEST_CASE("power addition law") {
  testkit::Rng rng(13);
  for (int it = 0; it < 50; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 100.0, 1.0, rng);
    const double p = rng.uniform(-1, 1), q = rng.uniform(-1, 1);
    const Matrix lhs = mat_pow(a, p + q).matrix();
    const Matrix rhs = (mat_pow(a, p).matrix() * mat_pow(a, q).matrix()).symmetrized();
    CHECK(rel_err(lhs, rhs) < 1e-9);
    CHECK((mat_pow(a, 0.0).matrix() - Matrix::identity(dim)).max_abs() < 1e-12);
  }
}

TEST_CASE("mat_inv agrees with the spectral route") {
  testkit::Rng rng(17);
  for (int it = 0; it < 50; ++it) {
    const int dim = rng.uniform_int(1, 6);
    const SpdMatrix a = testkit::random_spd(dim, 1e3, 1.0, rng);
    const auto eig = sym_eig(a);
    const Matrix spectral = spectral_map(eig, [](double l) { return 1.0 / l; });
    CHECK(rel_err(mat_inv(a).matrix(), spectral) < 1e-10);
  }
}

TEST_CASE("congruence examples") {
  const SpdMatrix a = SpdMatrix::diagonal({1, 4});
  CHECK(rel_err(congruence(Matrix::identity(2), a).matrix(), a.matrix()) < 1e-15);
  CHECK(rel_err(congruence(Matrix::identity(2) * 2.0, a).matrix(), Matrix{{4, 0}, {0, 16}}) <
        1e-15);
  // S = [[1,1],[0,1]] on I: S Sᵗ = [[2,1],[1,1]]
  CHECK(rel_err(congruence(Matrix{{1, 1}, {0, 1}}, SpdMatrix::identity(2)).matrix(),
                Matrix{{2, 1}, {1, 1}}) < 1e-15);
  CHECK_THROWS_AS(congruence(Matrix{{1, 1}, {1, 1}}, a), SingularTransform);
  CHECK_THROWS_AS(congruence(Matrix::identity(3), a), DimensionMismatch);
}

TEST_CASE("congruence round-trip") {
  testkit::Rng rng(19);
  for (int it = 0; it < 30; ++it) {
    const int dim = rng.uniform_int(1, 6);
    const SpdMatrix a = testkit::random_spd(dim, 100.0, 1.0, rng);
    const Matrix s = testkit::random_invertible(dim, rng);
    const SpdMatrix gram(s.transposed() * s);
    const Matrix sinv = inverse_from_cholesky(gram.cholesky_factor()) * s.transposed();
    CHECK(rel_err(congruence(s, congruence(sinv, a)).matrix(), a.matrix()) < 1e-9);
  }
}

TEST_CASE("loewner order on examples") {
  const SpdMatrix eye = SpdMatrix::identity(2);
  const SpdMatrix two(Matrix::identity(2) * 2.0);
  CHECK(loewner_leq(eye, two, 0.0));
  CHECK_FALSE(loewner_leq(two, eye, 0.0));
  // diag(1,4) and diag(2,2) are incomparable both ways.
  const SpdMatrix a = SpdMatrix::diagonal({1, 4});
  const SpdMatrix b = SpdMatrix::diagonal({2, 2});
  CHECK_FALSE(loewner_leq(a, b, 1e-12));
  CHECK_FALSE(loewner_leq(b, a, 1e-12));
  CHECK(loewner_leq(a, a, 0.0));
  CHECK_THROWS_AS(loewner_leq(eye, SpdMatrix::identity(3), 0.0), DimensionMismatch);
}

TEST_CASE("cholesky log-det matches eigenvalue sum") {
  testkit::Rng rng(23);
  for (int it = 0; it < 30; ++it) {
    const int dim = rng.uniform_int(1, 8);
    const SpdMatrix a = testkit::random_spd(dim, 1e4, 1.0, rng);
    double sum = 0.0;
    for (double l : sym_eig(a).eigenvalues) sum += std::log(l);
    CHECK(a.log_det() == doctest::Approx(sum).epsilon(1e-10));
  }
}
