#include "spdmean/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spdmean/errors.hpp"

namespace spdmean::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Nested numeric array: number | '[' value, ... ']'.
struct ArrayNode {
  bool is_number = false;
  double number = 0.0;
  std::vector<ArrayNode> items;
};

class ValueParser {
 public:
  explicit ValueParser(const std::string& text) : s_(text) {}

  ArrayNode parse() {
    ArrayNode node = parse_value();
    skip_space();
    if (pos_ != s_.size()) throw ParseError("trailing characters after value: '" + s_ + "'");
    return node;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ArrayNode parse_value() {
    skip_space();
    if (pos_ >= s_.size()) throw ParseError("empty value");
    if (s_[pos_] == '[') return parse_list();
    return parse_number();
  }

  ArrayNode parse_list() {
    ArrayNode node;
    ++pos_;  // '['
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return node;
    }
    for (;;) {
      node.items.push_back(parse_value());
      skip_space();
      if (pos_ >= s_.size()) throw ParseError("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return node;
      }
      throw ParseError("expected ',' or ']' in array");
    }
  }

  ArrayNode parse_number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw ParseError("expected a number near '" + s_.substr(pos_) + "'");
    pos_ += static_cast<std::size_t>(end - start);
    ArrayNode node;
    node.is_number = true;
    node.number = v;
    return node;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double as_number(const ArrayNode& n, const char* key) {
  if (!n.is_number) throw ParseError(std::string(key) + ": expected a scalar");
  return n.number;
}

std::vector<double> as_vector(const ArrayNode& n, const char* key) {
  if (n.is_number) throw ParseError(std::string(key) + ": expected an array");
  std::vector<double> out;
  out.reserve(n.items.size());
  for (const auto& item : n.items) out.push_back(as_number(item, key));
  return out;
}

Matrix as_matrix(const ArrayNode& n, const char* key) {
  if (n.is_number) throw ParseError(std::string(key) + ": expected a nested array");
  const int rows = static_cast<int>(n.items.size());
  if (rows == 0) throw ParseError(std::string(key) + ": empty matrix");
  const std::vector<double> first = as_vector(n.items[0], key);
  Matrix m(rows, static_cast<int>(first.size()));
  for (int i = 0; i < rows; ++i) {
    const std::vector<double> row = as_vector(n.items[i], key);
    if (static_cast<int>(row.size()) != m.cols())
      throw ParseError(std::string(key) + ": ragged matrix rows");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = row[j];
  }
  return m;
}

int bracket_balance(const std::string& s) {
  int b = 0;
  for (char c : s) {
    if (c == '[') ++b;
    if (c == ']') --b;
  }
  return b;
}

std::string format_matrix(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_double(m(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MatrixTuple ProblemFile::tuple() const {
  return MatrixTuple(matrices,
                     weights ? *weights : WeightVector::uniform(static_cast<int>(matrices.size())));
}

ProblemFile parse_problem(const std::string& text) {
  ProblemFile p;
  std::optional<std::vector<double>> raw_weights;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    // Values may continue across lines until their brackets balance.
    while (bracket_balance(line) > 0) {
      std::string more;
      if (!std::getline(in, more)) throw ParseError("unterminated array at end of file");
      ++line_no;
      if (const auto hash = more.find('#'); hash != std::string::npos) more.resize(hash);
      line += ' ';
      line += more;
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto colon = stripped.find(':');
    if (colon == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key: value'");
    const std::string key = trim(stripped.substr(0, colon));
    const std::string value = trim(stripped.substr(colon + 1));
    ArrayNode node = ValueParser(value).parse();
    if (key == "dim") {
      p.dim = static_cast<int>(as_number(node, "dim"));
    } else if (key == "matrix") {
      Matrix m = as_matrix(node, "matrix");
      if (!m.is_square()) throw ParseError("matrix: not square");
      if (!m.is_symmetric(1e-10)) throw ParseError("matrix: not symmetric within 1e-10");
      try {
        p.matrices.emplace_back(m);
      } catch (const NotPositiveDefinite&) {
        throw ParseError("matrix: not positive definite");
      }
    } else if (key == "weights") {
      raw_weights = as_vector(node, "weights");
    } else if (key == "t") {
      p.t = as_number(node, "t");
    } else if (key == "alpha") {
      p.alpha = as_number(node, "alpha");
    } else {
      throw ParseError("unknown key '" + key + "'");
    }
  }
  if (p.matrices.empty()) throw ParseError("problem file contains no matrices");
  if (p.dim == 0) p.dim = p.matrices.front().dim();
  for (const auto& m : p.matrices)
    if (m.dim() != p.dim) throw ParseError("matrix dimension does not match 'dim'");
  if (raw_weights) {
    if (raw_weights->size() != p.matrices.size())
      throw ParseError("weights: count does not match matrix count");
    try {
      p.weights = WeightVector(*raw_weights);
    } catch (const Error& e) {
      throw ParseError(std::string("weights: ") + e.what());
    }
  }
  return p;
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string write_problem(const ProblemFile& p) {
  std::string out;
  out += "dim: " + std::to_string(p.dim) + "\n";
  for (const auto& m : p.matrices) out += "matrix: " + format_matrix(m.matrix()) + "\n";
  if (p.weights) {
    out += "weights: [";
    for (int i = 0; i < p.weights->size(); ++i) {
      if (i) out += ", ";
      out += format_double((*p.weights)[i]);
    }
    out += "]\n";
  }
  if (p.t) out += "t: " + format_double(*p.t) + "\n";
  if (p.alpha) out += "alpha: " + format_double(*p.alpha) + "\n";
  return out;
}

void write_problem_file(const std::string& path, const ProblemFile& p) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << write_problem(p);
}

std::string write_result(const ResultRecord& r) {
  std::string out;
  out += "kind: " + r.kind + "\n";
  out += "dim: " + std::to_string(r.report.solution.dim()) + "\n";
  if (r.t) out += "t: " + format_double(*r.t) + "\n";
  if (r.z) out += "z: " + format_double(*r.z) + "\n";
  if (r.alpha) out += "alpha: " + format_double(*r.alpha) + "\n";
  out += "iterations: " + std::to_string(r.report.iterations) + "\n";
  out += "residual: " + format_double(r.report.residual) + "\n";
  out += "fixed_point_residual: " + format_double(r.report.fixed_point_residual) + "\n";
  out += "contraction_estimate: " + format_double(r.report.contraction_estimate) + "\n";
  out += std::string("direct: ") + (r.report.direct ? "1" : "0") + "\n";
  out += "wall_time_s: " + format_double(r.wall_time_s) + "\n";
  out += "solution: " + format_matrix(r.report.solution.matrix()) + "\n";
  return out;
}

void write_result_file(const std::string& path, const ResultRecord& r) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << write_result(r);
}

}  // namespace spdmean::io
