#include "siml/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "siml/rng.hpp"

namespace siml {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two times");
  if (times_.front() != 0.0 || times_.back() != 1.0)
    throw std::invalid_argument("TimeGrid: times must start at 0 and end at 1");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("TimeGrid: times must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    if (!std::isfinite(times_[i]))
      throw std::invalid_argument("TimeGrid: non-finite time at index " + std::to_string(i));
  }
}

double TimeGrid::mesh() const {
  double w = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) w = std::max(w, times_[i] - times_[i - 1]);
  return w;
}

bool TimeGrid::is_uniform() const {
  int n = intervals();
  for (int k = 0; k <= n; ++k)
    if (std::fabs(times_[static_cast<std::size_t>(k)] - static_cast<double>(k) / n) > 1e-12)
      return false;
  return true;
}

int TimeGrid::cell_of(double s) const {
  if (s < 0.0 || s > 1.0)
    throw std::invalid_argument("TimeGrid::cell_of: argument must lie in [0,1]");
  if (s >= times_[times_.size() - 2]) return intervals() - 1;
  auto it = std::upper_bound(times_.begin(), times_.end(), s);
  return static_cast<int>(it - times_.begin()) - 1;
}

TimeGrid make_uniform_grid(int n) {
  if (n < 1) throw std::invalid_argument("make_uniform_grid: n must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;
  t[0] = 0.0;
  t[static_cast<std::size_t>(n)] = 1.0;
  return TimeGrid(std::move(t));
}

TimeGrid make_poisson_grid(double intensity, std::uint64_t seed) {
  if (!(intensity > 0.0)) throw std::invalid_argument("make_poisson_grid: intensity must be > 0");
  Rng rng(seed);
  std::vector<double> t;
  t.push_back(0.0);
  double s = 0.0;
  while (true) {
    s += rng.exponential(intensity);
    if (s >= 1.0) break;
    if (s > t.back()) t.push_back(s);
  }
  t.push_back(1.0);
  if (t.size() < 2) t = {0.0, 1.0};
  return TimeGrid(std::move(t));
}

SchemeRule parse_scheme(const std::string& name) {
  if (name == "left") return SchemeRule::left;
  if (name == "right") return SchemeRule::right;
  if (name == "midpoint") return SchemeRule::midpoint;
  if (name == "ksss") return SchemeRule::ksss;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected left, right, midpoint, or ksss)");
}

std::string scheme_name(SchemeRule rule) {
  switch (rule) {
    case SchemeRule::left: return "left";
    case SchemeRule::right: return "right";
    case SchemeRule::midpoint: return "midpoint";
    case SchemeRule::ksss: return "ksss";
  }
  return "?";
}

SamplingMap::SamplingMap(TimeGrid grid, std::vector<double> representatives)
    : grid_(std::move(grid)), reps_(std::move(representatives)) {
  if (static_cast<int>(reps_.size()) != grid_.intervals())
    throw std::invalid_argument("SamplingMap: need one representative per interval");
}

SamplingMap sampling_map(const TimeGrid& grid, SchemeRule rule) {
  int n = grid.intervals();
  const std::vector<double>& t = grid.times();
  std::vector<double> reps(static_cast<std::size_t>(n));
  switch (rule) {
    case SchemeRule::left:
      for (int k = 0; k < n; ++k) reps[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k)];
      break;
    case SchemeRule::right:
      for (int k = 0; k < n; ++k)
        reps[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k) + 1];
      break;
    case SchemeRule::midpoint:
      for (int k = 0; k < n; ++k)
        reps[static_cast<std::size_t>(k)] =
            0.5 * (t[static_cast<std::size_t>(k)] + t[static_cast<std::size_t>(k) + 1]);
      break;
    case SchemeRule::ksss:
      // (2k-1)/(2n+1) for k = 1..n; lies inside [(k-1)/n, k/n) only on a
      // uniform grid, which is therefore required.
      if (!grid.is_uniform())
        throw std::invalid_argument("sampling_map: the ksss rule requires a uniform grid");
      for (int k = 1; k <= n; ++k)
        reps[static_cast<std::size_t>(k) - 1] =
            static_cast<double>(2 * k - 1) / static_cast<double>(2 * n + 1);
      break;
  }
  return SamplingMap(grid, std::move(reps));
}

MapValidation validate_map(const SamplingMap& map) {
  const std::vector<double>& t = map.grid().times();
  const std::vector<double>& r = map.reps();
  MapValidation v;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] < t[k] || r[k] > t[k + 1]) {
      v.valid = false;
      v.failed = MapCondition::in_interval;
      v.interval = static_cast<int>(k) + 1;
      return v;
    }
  }
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (r[k] == r[k - 1]) {
      v.valid = false;
      v.failed = MapCondition::adjacent_distinct;
      v.interval = static_cast<int>(k) + 1;
      return v;
    }
  }
  return v;
}

TimeGrid common_refinement(const TimeGrid& a, const TimeGrid& b) {
  std::vector<double> merged;
  merged.reserve(a.times().size() + b.times().size());
  std::merge(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return TimeGrid(std::move(merged));
}

}  // namespace siml
