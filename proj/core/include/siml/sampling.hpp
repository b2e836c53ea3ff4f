#pragma once
// Observation-time grids on [0,1] and interval-representative sampling maps.
//
// A sampling map phi assigns to every observation interval [t_{k-1}, t_k) a
// single representative point used as the argument of the cosine kernel.  A
// map is admissible when
//   (A1) the representative of interval k lies in [t_{k-1}, t_k], and
//   (A2) representatives of adjacent intervals are distinct.
// The built-in schemes (left / right / midpoint / ksss) always produce
// admissible maps; user-supplied representatives are accepted as-is and can
// be checked with validate_map().

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace siml {

// Strictly increasing times t_0 = 0 < t_1 < ... < t_n = 1.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  const std::vector<double>& times() const { return times_; }
  // Number of observation intervals n (one less than the number of times).
  int intervals() const { return static_cast<int>(times_.size()) - 1; }
  // Largest interval width.
  double mesh() const;
  // True when t_k == k/n up to 1e-12 for every k.
  bool is_uniform() const;
  // 0-based index of the interval containing s (s == 1 maps to the last one).
  int cell_of(double s) const;

 private:
  std::vector<double> times_;
};

// Uniform grid {k/n : k = 0..n}.
TimeGrid make_uniform_grid(int n);

// Homogeneous Poisson arrivals on (0,1) with the given intensity, endpoints
// adjoined.  Deterministic for a fixed seed.
TimeGrid make_poisson_grid(double intensity, std::uint64_t seed);

enum class SchemeRule { left, right, midpoint, ksss };

SchemeRule parse_scheme(const std::string& name);
std::string scheme_name(SchemeRule rule);

// Piecewise-constant map s -> representative(cell containing s).
class SamplingMap {
 public:
  SamplingMap(TimeGrid grid, std::vector<double> representatives);

  double operator()(double s) const { return reps_[grid_.cell_of(s)]; }
  double rep(int cell) const { return reps_[static_cast<std::size_t>(cell)]; }
  const std::vector<double>& reps() const { return reps_; }
  const TimeGrid& grid() const { return grid_; }

 private:
  TimeGrid grid_;
  std::vector<double> reps_;
};

// Representatives for the requested scheme.  The ksss rule places interval k
// at (2k-1)/(2n+1) and requires a uniform grid.
SamplingMap sampling_map(const TimeGrid& grid, SchemeRule rule);

enum class MapCondition { in_interval, adjacent_distinct };

struct MapValidation {
  bool valid = true;
  MapCondition failed = MapCondition::in_interval;
  int interval = 0;  // 1-based index of the first offending interval
};

MapValidation validate_map(const SamplingMap& map);

// Sorted union of the two grids' times (exact duplicates collapsed).  Both
// inputs are subsequences of the result and the mesh never increases.
TimeGrid common_refinement(const TimeGrid& a, const TimeGrid& b);

}  // namespace siml
