#include <cmath>

#include "doctest.h"
#include "spdmean/errors.hpp"
#include "spdmean/problem_io.hpp"
#include "spdmean/testkit.hpp"

using namespace spdmean;
using spdmean::io::ProblemFile;

TEST_CASE("parse a minimal problem document") {
  const std::string text = R"(# demo
dim: 2
matrix: [[2, -1], [-1, 2]]
matrix: [[3, -2], [-2, 3]]
weights: [0.25, 0.75]
t: 0.5
alpha: 0.0
)";
  const ProblemFile p = io::parse_problem(text);
  CHECK(p.dim == 2);
  CHECK(p.matrices.size() == 2);
  CHECK(p.matrices[0](0, 1) == -1.0);
  REQUIRE(p.weights.has_value());
  CHECK((*p.weights)[1] == doctest::Approx(0.75));
  CHECK(p.t == 0.5);
  CHECK(p.alpha == 0.0);
}

TEST_CASE("dim is inferred when omitted and arrays may span lines") {
  const std::string text = R"(
matrix: [[4, 0],
         [0, 9]]
)";
  const ProblemFile p = io::parse_problem(text);
  CHECK(p.dim == 2);
  CHECK(p.matrices[0](1, 1) == 9.0);
}

TEST_CASE("parse failures carry ParseError") {
  CHECK_THROWS_AS(io::parse_problem(""), ParseError);
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 2], [3]]"), ParseError);
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 0], [0, 1]\n"), ParseError);
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 0.5], [0.2, 1]]"), ParseError);  // asymmetric
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 2], [2, 1]]"), ParseError);  // indefinite
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 0], [0, 1]]\nweights: [0.5, 0.5]"), ParseError);
  CHECK_THROWS_AS(io::parse_problem("matrix: [[1, 0], [0, 1]]\nweights: [1, -1]"), ParseError);
  CHECK_THROWS_AS(io::parse_problem("nonsense: 1\nmatrix: [[1]]"), ParseError);
  CHECK_THROWS_AS(io::parse_problem("dim: 3\nmatrix: [[1]]"), ParseError);
}

TEST_CASE("write/parse round-trip is bit exact") {
  testkit::Rng rng(91);
  for (int it = 0; it < 20; ++it) {
    ProblemFile p;
    p.dim = rng.uniform_int(1, 6);
    const int n = rng.uniform_int(1, 5);
    for (int i = 0; i < n; ++i)
      p.matrices.push_back(testkit::random_spd(p.dim, 1e3, rng.uniform(0.1, 10.0), rng));
    if (rng.uniform() < 0.5) p.weights = testkit::random_weights(n, rng);
    if (rng.uniform() < 0.5) p.t = rng.uniform();
    if (rng.uniform() < 0.5) p.alpha = rng.uniform(-1.0, 1.0);

    const ProblemFile q = io::parse_problem(io::write_problem(p));
    CHECK(q.dim == p.dim);
    REQUIRE(q.matrices.size() == p.matrices.size());
    for (int i = 0; i < n; ++i)
      CHECK((q.matrices[i].matrix() - p.matrices[i].matrix()).max_abs() == 0.0);
    CHECK(q.weights.has_value() == p.weights.has_value());
    if (p.weights)
      for (int i = 0; i < n; ++i) CHECK((*q.weights)[i] == (*p.weights)[i]);
    CHECK(q.t == p.t);
    CHECK(q.alpha == p.alpha);
  }
}

TEST_CASE("result records serialize every report field") {
  SolveReport report{SpdMatrix::diagonal({2.0, 3.0})};
  report.iterations = 12;
  report.residual = 1e-13;
  report.fixed_point_residual = 2e-14;
  report.contraction_estimate = 0.5;
  const io::ResultRecord record{"g", 0.5, std::nullopt, std::nullopt, report, 0.001};
  const std::string text = io::write_result(record);
  CHECK(text.find("kind: g") != std::string::npos);
  CHECK(text.find("t: 0.5") != std::string::npos);
  CHECK(text.find("iterations: 12") != std::string::npos);
  CHECK(text.find("solution: [[2, 0], [0, 3]]") != std::string::npos);
  CHECK(text.find("z:") == std::string::npos);
}

TEST_CASE("seventeen significant digits round-trip doubles") {
  testkit::Rng rng(97);
  for (int it = 0; it < 1000; ++it) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    CHECK(std::stod(io::format_double(x)) == x);
  }
}
