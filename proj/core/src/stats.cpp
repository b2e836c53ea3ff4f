#include "siml/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace siml {

double mean(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("mean: empty sample");
  double acc = 0.0;
  for (double x : sample) acc += x;
  return acc / static_cast<double>(sample.size());
}

double sample_variance(const std::vector<double>& sample) {
  if (sample.size() < 2) {
    throw std::invalid_argument("sample_variance: need at least two points");
  }
  const double mu = mean(sample);
  double acc = 0.0;
  for (double x : sample) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(sample.size() - 1);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_statistic(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(sample);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double pi = std::numbers::pi;
  if (lambda < 0.3) {
    // The alternating series converges too slowly here; its theta-transformed
    // complement needs only a couple of terms.
    double sum = 0.0;
    for (int k = 1; k <= 11; k += 2)
      sum += std::exp(-k * k * pi * pi / (8.0 * lambda * lambda));
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 128; ++k) {
    const double term = std::exp(a * static_cast<double>(k) * k);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) throw std::invalid_argument("ks_pvalue: empty sample");
  const double root = std::sqrt(static_cast<double>(n));
  return kolmogorov_q(d * (root + 0.12 + 0.11 / root));
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace siml
