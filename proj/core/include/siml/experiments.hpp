#pragma once

// Monte Carlo experiment drivers.
//
// Each driver runs the configured replications, reports one covariance
// entry — (0,0) for univariate models, (0,1) otherwise — and derives all
// randomness from (seed, grid-size index, replication) so results do not
// depend on thread count or execution order.

#include <vector>

#include "siml/config.hpp"

namespace siml {

// One grid size worth of Monte Carlo aggregates.
struct McRow {
  int n = 0;  // nominal observations per asset (poisson: the intensity)
  int m = 0;  // kernel order used at this n
  double truth = 0.0;   // mean per-replication integrated covariance entry
  double center = 0.0;  // mean finite-sample centring value (deterministic models)
  double mean = 0.0;    // mean estimate
  double bias = 0.0;    // mean of estimate minus per-replication truth
  double se = 0.0;      // standard error of the mean estimate
  double rmse = 0.0;    // root mean squared error against per-replication truth
  double m_var = 0.0;   // kernel order times the sample variance of the estimates
  double ks_stat = 0.0;  // distribution runs only: Kolmogorov-Smirnov statistic
  double ks_p = 0.0;     // and its p-value
  std::vector<double> standardized;  // distribution runs: scaled standardized errors
};

struct McSummary {
  std::vector<McRow> rows;     // one per n-list entry, in order
  double sd_theory = 0.0;      // distribution runs: asymptotic sd of sqrt(m)(V - center)
  int asset_a = 0;             // which covariance entry the numbers describe
  int asset_b = 0;
};

struct NoiseRow {
  int n = 0;
  int m = 0;
  double truth = 0.0;
  double siml_mean = 0.0, siml_bias = 0.0, siml_se = 0.0;
  double rv_mean = 0.0, rv_bias = 0.0, rv_se = 0.0;
};

struct NoiseComparison {
  std::vector<NoiseRow> rows;
  int asset_a = 0;
  int asset_b = 0;
};

// Bias / RMSE across the n-list.  Deterministic models measure against the
// exact integrated covariance; stochastic-volatility models against each
// replication's realised integrated covariance.
McSummary run_consistency(const ExperimentConfig& cfg);

// Distribution of the scaled error sqrt(m) (V - centring) at each n, with
// its Kolmogorov-Smirnov comparison against the limiting normal.  Requires
// deterministic volatility: under stochastic volatility the limit is mixed
// normal and a fixed reference distribution would be wrong.
McSummary run_normality(const ExperimentConfig& cfg);

// Side-by-side bias of the cosine-weighted estimator and of the plain sum
// of increment products under microstructure noise.  Requires uniform
// (synchronous) grids, since the plain estimator needs common sample times.
NoiseComparison run_noise_comparison(const ExperimentConfig& cfg);

}  // namespace siml
