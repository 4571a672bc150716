#pragma once

// Check catalog, deterministic sampling of (tau, gamma) pairs, the suite
// runner with its worker pool, and JSON report output.

#include <cstdint>
#include <string>
#include <vector>

#include "mockmod/core.hpp"

namespace mockmod::harness {

enum class Suite { rank, joyce, appell, theta, duke, all };

const char* suite_name(Suite s) noexcept;
/// Throws Error(config) for unknown names.
Suite parse_suite(const std::string& s);

struct Sample {
  Tau tau;
  Mobius gamma;
};

/// n pairs from a mt19937_64 stream: tau uniform in |u| <= 1/2, v in [0.8, 2];
/// gamma a word in S and T^e (|e| <= 2) with entries bounded by 6, c != 0 and
/// Im(gamma tau) >= 0.2, resampled otherwise.
std::vector<Sample> sample_inputs(std::uint64_t seed, int n);
/// count matrices for one tau drawn from the same generator family.
std::vector<Mobius> sample_gammas(std::uint64_t seed, const Tau& tau, int count);

struct SuiteConfig {
  Suite suite = Suite::all;
  std::uint64_t seed = 1;
  int trunc = 200;
  int jet_order = 0;  // 0: each check's default
  double tol = -1.0;  // > 0 replaces every non-adjudication tolerance
  Precision precision = Precision::f64;
  std::string output_path;
  std::vector<int> ells;             // rank and appell levels; empty: {1,2,3} / {2,3}
  std::vector<int> ks;               // Joyce weights; empty: {2,4,6}
  std::vector<std::string> checks;   // group filter; empty: all groups
  int n_tau = 3;
  int n_gamma = 10;
  int workers = 0;  // 0: MOCKMOD_WORKERS or 1
};

struct CatalogEntry {
  std::string check_id;
  std::string suite;
  std::string group;   // name accepted by --checks
  std::string anchor;  // the identity the check certifies
  bool adjudication = false;
};

const std::vector<CatalogEntry>& catalog();
/// Group names accepted by --checks for a suite.
std::vector<std::string> groups(Suite s);

struct SuiteResult {
  std::vector<Report> reports;
  int exit_code = 0;  // 0 all pass, 1 some non-adjudication check failed
};

/// Runs the selected part of the catalog. Throws Error(config) on an invalid
/// configuration; exceptions inside a check become failed reports.
SuiteResult run_suite(const SuiteConfig& config);

/// Worker count from MOCKMOD_WORKERS (>= 1); throws Error(config) on garbage.
int workers_from_env();

struct CoverageRow {
  std::string anchor;
  std::vector<std::string> check_ids;
  int reports = 0;
  int failed = 0;
};
std::vector<CoverageRow> coverage(const std::vector<Report>& reports);

/// {"config": ..., "summary": ..., "reports": [...], "coverage": [...]}.
/// With timings == false every runtime_ms is written as 0.
std::string to_json(const SuiteConfig& config, const SuiteResult& result, bool timings = true);
std::string report_to_json(const Report& r);
std::string catalog_json();

}  // namespace mockmod::harness
