// Batch verification suites: each one sweeps randomized trials of a single
// identity or inequality and counts violations.  Suites draw their randomness
// from fixed per-suite child seeds, so results depend only on (seed, trials) —
// not on which other suites run, their order, or the worker count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace baf {

struct SuiteResult {
  std::string name;
  long long trials = 0;
  long long violations = 0;
  // Largest per-trial discrepancy, measured however the suite grades itself:
  // deviation for identity suites, signed slack for inequality suites.  A
  // trial counts as a violation when its discrepancy exceeds the tolerance.
  double worst = 0;
  double tolerance = 0;
  bool pass() const { return violations == 0; }
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  int jobs = 1;
  // Total trial count per suite; 0 keeps each suite's default.
  long long trials = 0;
  // Subset of suite names to run; empty means all.
  std::vector<std::string> suites;
};

// Canonical suite order: hodge, multiplier_match, lp_identity, embedding,
// burkholder, bilinear_haar.
const std::vector<std::string>& verify_suite_names();

SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg);

// Runs the configured suites on up to cfg.jobs workers and returns results in
// canonical order.  Throws std::invalid_argument for unknown suite names.
std::vector<SuiteResult> run_verification(const VerifyConfig& cfg);

}  // namespace baf
