#pragma once
// Reproducible random streams.
//
// Stream identity: stream k of master seed S is a std::mt19937_64 engine
// seeded with splitmix64 applied to S + (k+1) * 0x9E3779B97F4A7C15 (golden
// ratio increment).  mt19937_64 output is fully specified by the standard
// and the derived quantities below (uniforms via the top 53 bits, normals
// via Box-Muller, exponentials via inversion) are implemented here rather
// than with std::*_distribution, whose algorithms are implementation
// defined.  A (seed, stream) pair therefore yields the same draws on every
// platform, every run, and under any thread schedule.

#include <cstdint>
#include <random>

namespace siml {

// One splitmix64 step; also used to whiten seed material.
std::uint64_t splitmix64(std::uint64_t& state);

// Collapse any number of integers into a single stream index.
std::uint64_t mix_streams(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on (0,1): top 53 bits, offset by half an ulp so 0 never occurs.
  double uniform();
  // Standard normal via Box-Muller; the spare draw of each pair is cached.
  double normal();
  // Exponential with the given rate, by inversion.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace siml
