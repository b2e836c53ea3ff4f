#pragma once

// Experiment configuration: a strict JSON schema with kebab-case keys.
//
// Unknown keys are rejected, every violated constraint is reported (all at
// once, not just the first), and a parsed configuration can be re-serialized
// in a canonical form so that reports embed the same bytes no matter how the
// input file was formatted.
//
// Schema (top-level keys):
//   model          object, required:
//                    type   "constant" | "ou-volatility"
//                    sigma  array of equal-length rows (assets x drivers)
//                    drift  optional array (per asset)
//                    x0     optional array (per asset)
//                    reversion/level/vol/init   optional numbers
//                                               (ou-volatility only)
//   schemes        array of "left"|"right"|"midpoint"|"ksss", required;
//                  a single entry applies to every asset
//   grid           "uniform" | "poisson", default "uniform"
//   n-list         strictly ascending positive integers, required
//   m-rule         {"fixed": m} or {"c": c, "alpha": a}, required
//   replications   integer >= 1, required
//   seed           unsigned integer, required
//   noise          optional {"sd": >=0, "dist": "gaussian"|"uniform"}
//   steps-per-obs  optional integer >= 1 (fine mesh = this times n)
//   threads        optional integer >= 1
//   center         optional "bias-center" | "truth"
//   out-dir        optional string

#include <cstdint>
#include <string>
#include <vector>

#include "siml/matrix.hpp"
#include "siml/sampling.hpp"
#include "siml/simulate.hpp"

namespace siml {

struct ModelSpec {
  enum class Kind { constant, ou_volatility };
  Kind kind = Kind::constant;
  Matrix sigma;               // assets x drivers
  std::vector<double> drift;  // empty = no drift
  std::vector<double> x0;     // empty = zeros
  OuVolFactor factor;         // ou_volatility only

  int assets() const { return sigma.rows(); }
  PathModel build() const;
};

enum class GridKind { uniform, poisson };
enum class CenterRule { bias_center, truth };

// Kernel-order rule: either a fixed order or floor(c * n^alpha).
struct MRule {
  bool fixed = false;
  int fixed_m = 0;
  double c = 1.0;
  double alpha = 0.4;

  int resolve(int n) const;
};

struct ExperimentConfig {
  ModelSpec model;
  std::vector<SchemeRule> schemes;  // one per asset after broadcasting
  GridKind grid = GridKind::uniform;
  std::vector<int> n_list;
  MRule m_rule;
  int replications = 0;
  std::uint64_t seed = 0;
  NoiseSpec noise;  // sd == 0 means noiseless
  int steps_per_obs = 1;
  int threads = 1;
  CenterRule center = CenterRule::bias_center;
  std::string out_dir;
};

// Parse and validate.  Throws std::invalid_argument whose message lists
// every violation, one per line.
ExperimentConfig parse_config(const std::string& json_text);

// parse_config applied to a file's contents; IO failures name the path.
ExperimentConfig load_config_file(const std::string& path);

// Canonical JSON serialization of a parsed configuration: fixed key order,
// defaults made explicit, shortest round-trip numbers.  Two configurations
// with the same parsed content serialize to identical bytes.
std::string canonical_config_json(const ExperimentConfig& cfg);

const char* grid_name(GridKind kind);
const char* center_name(CenterRule rule);

}  // namespace siml
