#pragma once

#include "tau2loop/check_result.hpp"
#include "tau2loop/sl2_decomp.hpp"

#include <cstdint>

namespace tau2 {

/// Everything one verification run needs; defaults match the CLI defaults.
struct RunConfig {
  long n = 3;
  long l = 3;
  std::vector<long> q_list;             // empty: all applicable labels
  std::vector<std::string> checks;      // empty or {"all"}: every check
  std::uint64_t seed = 0;
  long samples = 100;
  double tol = 1e-9;
  std::vector<Cplx> t_samples;          // empty: {0.5, 0.3+0.2i}
  std::string cache_dir;
  std::string out_path;
  long workers = 1;

  Json to_json() const;
};

struct Report {
  Json config;
  std::vector<CheckResult> results;
  long n_pass = 0, n_fail = 0, n_skip = 0;
  double elapsed_ms = 0.0;
  std::vector<std::string> warnings;

  bool all_ok() const { return n_fail == 0; }
  Json to_json() const;
  std::string pretty() const;
};

const std::vector<std::string>& available_check_ids();

/// Runs the selected checks (cheapest first), reusing cached operators when a
/// cache directory is configured, and writes the JSON report to out_path when
/// set. Throws std::invalid_argument for unknown check ids.
Report run(const RunConfig& cfg);

/// CSV table "t_re,t_im,Q,eigenvalue_re,eigenvalue_im,multiplicity".
std::string spectrum_csv(const RunConfig& cfg);

/// Lambda table, Drinfeld roots and the full sl2 pipeline summary.
Json decompose_summary(const RunConfig& cfg);

/// Builds and caches the named operators for (N, L); returns their names.
std::vector<std::string> gen_operators(const RunConfig& cfg);

} // namespace tau2
