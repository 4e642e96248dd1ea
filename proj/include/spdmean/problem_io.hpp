// Text formats for problem inputs and solver results. A document is a list
// of `key: value` lines where values are scalars or nested numeric arrays;
// '#' starts a comment. Numbers are written with 17 significant digits so a
// write/read cycle reproduces every double bit-exactly.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdmean/solvers.hpp"

namespace spdmean::io {

struct ProblemFile {
  int dim = 0;
  std::vector<SpdMatrix> matrices;
  std::optional<WeightVector> weights;  // uniform when absent
  std::optional<double> t;
  std::optional<double> alpha;

  /// Matrices with the file's weights (uniform fallback).
  MatrixTuple tuple() const;
};

/// Parses a problem document. Matrices must be square, symmetric within
/// 1e-10, and positive definite; weights must match the matrix count.
/// Throws ParseError.
ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem_file(const std::string& path);

std::string write_problem(const ProblemFile& p);
void write_problem_file(const std::string& path, const ProblemFile& p);

/// Solver result plus run metadata, as written by the CLI.
struct ResultRecord {
  std::string kind;
  std::optional<double> t;
  std::optional<double> z;
  std::optional<double> alpha;
  SolveReport report;
  double wall_time_s = 0.0;
};

std::string write_result(const ResultRecord& r);
void write_result_file(const std::string& path, const ResultRecord& r);

/// One double with 17 significant digits.
std::string format_double(double v);

}  // namespace spdmean::io
