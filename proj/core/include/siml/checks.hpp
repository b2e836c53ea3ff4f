#pragma once

// Deterministic self-verification suite for the kernel layer: exact
// identities, closed-form agreements, bound checks.  Every check reports
// its worst observed error so a report can show the margins, not just
// pass/fail.  All sampling uses a fixed seed, so two runs with the same
// options produce identical results.

#include <cstdint>
#include <string>
#include <vector>

namespace siml {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;     // worst error (or bound excess) observed
  double tolerance = 0.0;
  std::string detail;     // coverage parameters, human readable
};

struct CheckOptions {
  int max_m = 512;              // kernel orders covered by scans
  int identity_samples = 10000;  // random points for the closed-form identity
  int bound_samples = 100000;    // points per order for the envelope bound
  int orthogonality_max_l = 64;
  int cross_max_n = 64;      // left/right cross-diagonal cancellation
  int diagonal_max_n = 256;  // left-map diagonal value
  int kronecker_max_n = 64;  // interval-mass identities
  std::uint64_t seed = 20260823;
};

std::vector<CheckResult> run_kernel_checks(const CheckOptions& opt = {});

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace siml
