#pragma once

// Report writers.  Every experiment produces flat CSV tables for plotting
// plus one report.json combining the canonical configuration echo, the
// result rows, derived pass/fail checks, and the wall-clock runtime.
//
// All numbers are written in shortest round-trip form and all files end in
// LF, so two runs with the same configuration produce byte-identical output
// except for the "runtime-seconds" entry (which is why that entry sits on
// its own final line of report.json).

#include <string>
#include <vector>

#include "siml/checks.hpp"
#include "siml/config.hpp"
#include "siml/experiments.hpp"

namespace siml {

// consistency.csv (n,m,bias,rmse,se) and curves.csv (n,statistic,value in
// long form) and report.json, under cfg.out_dir.
void emit_consistency_report(const McSummary& summary, const ExperimentConfig& cfg,
                             double runtime_seconds);

// normality.csv (moments and test results per n), ecdf.csv (sorted
// standardized errors with their empirical and limit distribution values)
// and report.json.
void emit_normality_report(const McSummary& summary, const ExperimentConfig& cfg,
                           double runtime_seconds);

// noise.csv (cosine-weighted vs plain increment-product columns) and
// report.json.
void emit_noise_report(const NoiseComparison& comparison, const ExperimentConfig& cfg,
                       double runtime_seconds);

// Verification-suite results as JSON (a "checks" array plus runtime).
void emit_check_report(const std::vector<CheckResult>& results, const std::string& path,
                       double runtime_seconds);

// True when two report.json payloads differ at most in "runtime-seconds".
bool reports_equal_ignoring_runtime(const std::string& json_a, const std::string& json_b);

}  // namespace siml
