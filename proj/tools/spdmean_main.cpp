// Command-line front end: mean computation, t-sweeps, property verification
// and conjecture exploration over SPD problem files.
//
// Exit codes: 0 success; 1 internal/numerical failure (or failed checks in
// verify/sweep); 2 input file parse failure; 3 parameter or precondition
// violation; 4 iteration cap exceeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdmean/barycenter.hpp"
#include "spdmean/metrics.hpp"
#include "spdmean/problem_io.hpp"
#include "spdmean/solvers.hpp"
#include "spdmean/verify.hpp"

namespace {

using namespace spdmean;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitMaxIter = 4;

struct MeanArgs {
  std::string kind;
  std::string input;
  std::optional<double> t;
  std::optional<double> z;
  std::optional<double> alpha;
  std::string weights;
  double tol = 1e-12;
  int max_iter = 10000;
  std::string init = "arithmetic";
  std::string out;
};

struct SweepArgs {
  std::string input;
  std::string grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  double tol = 1e-12;
  int max_iter = 10000;
  std::string out;
};

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int count = 0;
  std::string out;
};

struct ExploreArgs {
  std::string conjecture;
  std::uint64_t seed = 42;
  int count = 50;
  std::vector<double> t_values;
  std::string input;
};

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterOutOfRange(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ParameterOutOfRange(std::string(what) + ": empty list");
  return out;
}

// Grid spec: either "a,b,c" or "start:stop:step".
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_number_list(text, "--grid");
  const auto parts = [&] {
    std::vector<std::string> p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) p.push_back(item);
    return p;
  }();
  if (parts.size() != 3) throw ParameterOutOfRange("--grid: expected start:stop:step");
  const double start = std::stod(parts[0]), stop = std::stod(parts[1]), step = std::stod(parts[2]);
  if (!(step > 0.0)) throw ParameterOutOfRange("--grid: step must be positive");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = start + k * step;  // indexed, so decades land exactly
    if (v > stop + 0.5 * step) break;
    out.push_back(std::min(v, stop));
  }
  return out;
}

SolverOptions make_options(double tol, int max_iter, const std::string& init) {
  SolverOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  if (init == "arithmetic")
    opts.init = SolverOptions::Init::ArithmeticMean;
  else if (init == "harmonic")
    opts.init = SolverOptions::Init::HarmonicMean;
  else if (init == "identity")
    opts.init = SolverOptions::Init::Identity;
  else
    throw ParameterOutOfRange("--init: expected arithmetic, harmonic or identity");
  return opts;
}

MatrixTuple tuple_from(const io::ProblemFile& problem, const std::string& weights_flag) {
  if (weights_flag.empty()) return problem.tuple();
  return MatrixTuple(problem.matrices,
                     WeightVector(parse_number_list(weights_flag, "--weights")));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write '" + out_path + "'");
  out << text;
}

int run_mean(const MeanArgs& args) {
  const io::ProblemFile problem = io::read_problem_file(args.input);
  const MatrixTuple tuple = tuple_from(problem, args.weights);
  const SolverOptions opts = make_options(args.tol, args.max_iter, args.init);

  const std::optional<double> alpha = args.alpha ? args.alpha : problem.alpha;
  const std::optional<double> file_t = args.t ? args.t : problem.t;

  std::optional<double> rec_t, rec_z, rec_alpha;
  if (args.kind == "g") {
    // t wins when both are given; alpha maps through t = (1-alpha)/2.
    rec_t = file_t ? *file_t : (alpha ? 0.5 * (1.0 - *alpha) : 0.5);
    if (alpha && !file_t) rec_alpha = *alpha;
  } else if (args.kind == "power") {
    rec_t = file_t ? *file_t : 0.5;
  } else if (args.kind == "renyi") {
    rec_t = file_t ? *file_t : 0.5;
    rec_z = args.z ? *args.z : 0.5;
  }

  const auto start = std::chrono::steady_clock::now();
  SolveReport report = [&]() -> SolveReport {
    if (args.kind == "g") return g_mean(*rec_t, tuple, opts);
    if (args.kind == "power") return power_mean(*rec_t, tuple, opts);
    if (args.kind == "cartan") return cartan_mean(tuple, opts);
    if (args.kind == "wasserstein") return wasserstein_mean(tuple, opts);
    if (args.kind == "renyi") return renyi_power_mean(*rec_t, *rec_z, tuple, opts);
    if (args.kind == "arithmetic") {
      SolveReport r{arithmetic_mean(tuple)};
      r.direct = true;
      return r;
    }
    if (args.kind == "harmonic") {
      SolveReport r{harmonic_mean(tuple)};
      r.direct = true;
      return r;
    }
    throw ParameterOutOfRange("mean: unknown kind '" + args.kind + "'");
  }();
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(io::write_result(
           io::ResultRecord{args.kind, rec_t, rec_z, rec_alpha, std::move(report), wall}),
       args.out);
  return kExitOk;
}

int run_sweep(const SweepArgs& args) {
  const io::ProblemFile problem = io::read_problem_file(args.input);
  const MatrixTuple tuple = problem.tuple();
  const SolverOptions opts = make_options(args.tol, args.max_iter, "arithmetic");
  std::vector<double> grid = parse_grid(args.grid);
  std::sort(grid.begin(), grid.end());
  for (double t : grid)
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterOutOfRange("sweep: grid values must lie in [0,1]");

  const SpdMatrix arith = arithmetic_mean(tuple);
  const SpdMatrix harm = harmonic_mean(tuple);

  struct Row {
    double t, lambda_max, lambda_min, d_arith, d_harm;
    std::string error;
  };
  std::vector<Row> rows;
  bool any_error = false;
  for (double t : grid) {
    Row row{t, 0, 0, 0, 0, ""};
    try {
      const SpdMatrix g = g_mean(t, tuple, opts).solution;
      const auto eig = sym_eig(g);
      row.lambda_max = eig.max_eigenvalue();
      row.lambda_min = eig.min_eigenvalue();
      row.d_arith = thompson(g, arith);
      row.d_harm = thompson(g, harm);
    } catch (const Error& e) {
      row.error = e.what();
      any_error = true;
    }
    rows.push_back(row);
  }

  // Loewner monotonicity in t makes both extremal eigenvalues weakly
  // decreasing along the grid.
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (!rows[i].error.empty() || !rows[i + 1].error.empty()) continue;
    const double tol = 1e-8;
    if (rows[i + 1].lambda_max > rows[i].lambda_max + tol ||
        rows[i + 1].lambda_min > rows[i].lambda_min + tol)
      monotone = false;
  }

  std::ostringstream out;
  out << "# t  lambda_max(G_t)  lambda_min(G_t)  thompson(G_t, arithmetic)  "
         "thompson(G_t, harmonic)\n";
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      out << "t: " << io::format_double(row.t) << " error: " << row.error << "\n";
      continue;
    }
    out << "t: " << io::format_double(row.t) << " " << io::format_double(row.lambda_max) << " "
        << io::format_double(row.lambda_min) << " " << io::format_double(row.d_arith) << " "
        << io::format_double(row.d_harm) << "\n";
  }
  out << "eigenvalues_monotone: " << (monotone ? "pass" : "fail") << "\n";
  emit(out.str(), args.out);
  if (!args.out.empty())  // keep the summary visible either way
    std::cout << "eigenvalues_monotone: " << (monotone ? "pass" : "fail") << "\n";
  return (monotone && !any_error) ? kExitOk : kExitInternal;
}

int run_verify(const VerifyArgs& args) {
  if (!verify::is_suite_name(args.suite))
    throw ParameterOutOfRange("verify: unknown suite '" + args.suite + "'");
  verify::SuiteOptions opts;
  opts.seed = args.seed;
  opts.count = args.count;
  const auto results = verify::run_suite(args.suite, opts);
  std::cout << verify::format_report(results);
  const bool ok = verify::all_pass(results);
  if (!ok) {
    for (const auto& r : results)
      if (!r.pass) {
        std::cout << "first failing invariant: " << r.name << " (replay: --suite " << args.suite
                  << " --seed " << args.seed << ")\n";
        break;
      }
  }
  std::cout << "verify " << args.suite << ": " << (ok ? "all pass" : "FAILURES") << "\n";
  if (!args.out.empty()) emit(verify::write_report(args.suite, opts, results), args.out);
  return ok ? kExitOk : kExitInternal;
}

int run_explore(const ExploreArgs& args) {
  verify::ExploreOptions opts;
  opts.seed = args.seed;
  opts.count = args.count;
  opts.t_values = args.t_values;
  std::optional<MatrixTuple> fixed;
  if (!args.input.empty()) fixed = io::read_problem_file(args.input).tuple();
  if (args.conjecture == "g-vs-cartan")
    std::cout << verify::explore_g_vs_cartan(opts, fixed);
  else if (args.conjecture == "log-majorization")
    std::cout << verify::explore_log_majorization(opts, fixed);
  else
    throw ParameterOutOfRange("explore: unknown conjecture '" + args.conjecture + "'");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point matrix means on the SPD cone"};
  app.require_subcommand(1);

  MeanArgs mean_args;
  auto* mean_cmd = app.add_subcommand(
      "mean", "Compute a mean (g, power, cartan, wasserstein, renyi, arithmetic, harmonic)");
  mean_cmd->add_option("kind", mean_args.kind, "Mean kind")->required();
  mean_cmd->add_option("input", mean_args.input, "Problem file")->required();
  mean_cmd->add_option("--t", mean_args.t, "Parameter t");
  mean_cmd->add_option("--z", mean_args.z, "Renyi parameter z");
  mean_cmd->add_option("--alpha", mean_args.alpha, "Divergence order (g mean: t=(1-alpha)/2)");
  mean_cmd->add_option("--weights", mean_args.weights, "Comma-separated weights override");
  mean_cmd->add_option("--tol", mean_args.tol, "Convergence tolerance");
  mean_cmd->add_option("--max-iter", mean_args.max_iter, "Iteration cap");
  mean_cmd->add_option("--init", mean_args.init, "Start point: arithmetic|harmonic|identity");
  mean_cmd->add_option("--out", mean_args.out, "Result file (default: stdout)");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate G_t over a t grid");
  sweep_cmd->add_option("input", sweep_args.input, "Problem file")->required();
  sweep_cmd->add_option("--grid", sweep_args.grid, "Comma list or start:stop:step");
  sweep_cmd->add_option("--tol", sweep_args.tol, "Convergence tolerance");
  sweep_cmd->add_option("--max-iter", sweep_args.max_iter, "Iteration cap");
  sweep_cmd->add_option("--out", sweep_args.out, "Output file (default: stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  verify_cmd->add_option("--suite", verify_args.suite,
                         "thompson|properties|ordering|bounds|divergence|all");
  verify_cmd->add_option("--seed", verify_args.seed, "Base seed");
  verify_cmd->add_option("--count", verify_args.count, "Instance-count override (0 = defaults)");
  verify_cmd->add_option("--out", verify_args.out, "Machine-readable report file");

  ExploreArgs explore_args;
  auto* explore_cmd = app.add_subcommand("explore", "Gather evidence on open conjectures");
  explore_cmd->add_option("conjecture", explore_args.conjecture,
                          "g-vs-cartan|log-majorization")
      ->required();
  explore_cmd->add_option("--seed", explore_args.seed, "Base seed");
  explore_cmd->add_option("--count", explore_args.count, "Random instances");
  explore_cmd->add_option("--t", explore_args.t_values, "t values to probe");
  explore_cmd->add_option("--in", explore_args.input, "Problem file probed as instance 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  try {
    if (mean_cmd->parsed()) return run_mean(mean_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
    if (explore_cmd->parsed()) return run_explore(explore_args);
    std::cerr << "no subcommand given\n";
    return kExitPrecondition;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const MaxIterExceeded& e) {
    std::cerr << "no convergence: " << e.what()
              << " (best residual: " << e.best_iterate().residual << ")\n";
    return kExitMaxIter;
  } catch (const ParameterOutOfRange& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionViolated& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension mismatch: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
