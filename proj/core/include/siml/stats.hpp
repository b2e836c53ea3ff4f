#pragma once

// Small statistics toolkit used by the Monte Carlo experiment drivers:
// sample moments, the standard normal distribution function, and a
// Kolmogorov-Smirnov goodness-of-fit test against the standard normal.

#include <string>
#include <vector>

namespace siml {

// Arithmetic mean.  Throws std::invalid_argument on an empty sample.
double mean(const std::vector<double>& sample);

// Unbiased sample variance (denominator size-1).  Requires at least two
// points; throws std::invalid_argument otherwise.
double sample_variance(const std::vector<double>& sample);

// Standard normal cumulative distribution function.
double normal_cdf(double x);

// Two-sided Kolmogorov-Smirnov statistic of the sample against the standard
// normal distribution: the largest gap between the empirical distribution
// function and normal_cdf.  The input is copied and sorted internally.
// Throws std::invalid_argument on an empty sample.
double ks_statistic(const std::vector<double>& sample);

// Tail sum of the Kolmogorov distribution,
//   Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2),
// clamped to [0, 1].  Values of lambda below about 0.2 saturate at 1.
double kolmogorov_q(double lambda);

// Approximate p-value for a Kolmogorov-Smirnov statistic d on a sample of
// size n, using the Stephens small-sample correction
//   lambda = d * (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_pvalue(double d, std::size_t n);

// Shortest decimal string that parses back to exactly the same double
// (round-trip formatting).  Used for all numeric report output so that
// files are reproducible byte for byte.
std::string format_number(double value);

}  // namespace siml
