// Executable property suites over randomized ensembles: metric lemmas,
// solver certificates, mean inequalities, ordering/limit behavior, spectral
// bounds and the divergence/barycenter layer. Used by the `verify` CLI verb
// and by the acceptance tests.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spdmean/two_means.hpp"

namespace spdmean::verify {

struct CheckResult {
  std::string name;
  int instances = 0;
  double max_violation = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  /// Instance-count override; 0 keeps each check's built-in count.
  int count = 0;
};

/// Suites: thompson, properties, ordering, bounds, divergence, all.
std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);
std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opts = {});

bool all_pass(const std::vector<CheckResult>& results);

/// Human-readable table (one line per check).
std::string format_report(const std::vector<CheckResult>& results);

/// Machine-readable report document.
std::string write_report(const std::string& suite, const SuiteOptions& opts,
                         const std::vector<CheckResult>& results);
std::vector<CheckResult> parse_report(const std::string& text);

struct ExploreOptions {
  std::uint64_t seed = 42;
  int count = 50;
  std::vector<double> t_values;  // empty → per-conjecture default grid
};

/// Conjecture explorers; purely observational, never assert.
std::string explore_g_vs_cartan(const ExploreOptions& opts,
                                const std::optional<MatrixTuple>& fixed_instance);
std::string explore_log_majorization(const ExploreOptions& opts,
                                     const std::optional<MatrixTuple>& fixed_pair);

/// Runs fn(0..n-1) on a small thread pool; each index writes its own slot,
/// so results are deterministic regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace spdmean::verify
