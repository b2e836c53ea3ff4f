#pragma once
// Ito-process path simulation and discrete observation.
//
// Paths of dX_t = b(t, X_t) dt + sigma(t, X_t) dW_t on [0,1] are generated by
// the Euler scheme on a fine uniform mesh.  The simulator records the driver
// increments and the coefficient evaluations it used, so downstream
// diagnostics can rebuild stochastic integrals from exactly the same
// randomness.  Observation extracts per-asset values at grid times (left
// snap onto the fine mesh) and microstructure noise is added afterwards from
// an independent stream.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "siml/matrix.hpp"
#include "siml/sampling.hpp"

namespace siml {

// Mean-reverting log-volatility factor dF = reversion (level - F) dt
// + vol dW^F driven by a Brownian motion independent of the price drivers;
// the diffusion matrix is scaled by exp(F_t).
struct OuVolFactor {
  double reversion = 5.0;
  double level = 0.0;
  double vol = 0.5;
  double init = 0.0;
};

class PathModel {
 public:
  using SigmaTimeFn = std::function<void(double t, std::span<double> sigma_out)>;
  using DriftFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

  // Constant coefficients; sigma is assets x drivers (row major).
  static PathModel constant(Matrix sigma, std::vector<double> drift = {},
                            std::vector<double> x0 = {});
  // Deterministic time-varying diffusion (exact integrated covariance still
  // available through quadrature).
  static PathModel time_varying(int assets, int drivers, SigmaTimeFn sigma,
                                DriftFn drift = nullptr, std::vector<double> x0 = {});
  // Stochastic volatility: constant base matrix modulated by exp(F_t).
  static PathModel ou_volatility(Matrix base_sigma, OuVolFactor factor,
                                 std::vector<double> drift = {}, std::vector<double> x0 = {});

  int assets() const { return assets_; }
  int drivers() const { return drivers_; }
  bool deterministic_sigma() const { return deterministic_sigma_; }
  bool constant_sigma() const { return deterministic_sigma_ && !sigma_fn_; }
  bool has_factor() const { return factor_.has_value(); }
  const OuVolFactor& factor() const { return *factor_; }
  const std::vector<double>& x0() const { return x0_; }

  // sigma(t) into out (assets x drivers, row major); factor_value only used
  // by stochastic-volatility models.
  void eval_sigma(double t, double factor_value, std::span<double> out) const;
  void eval_drift(double t, std::span<const double> x, std::span<double> out) const;
  bool has_drift() const { return static_cast<bool>(drift_fn_) || !drift_const_.empty(); }

  // Instantaneous covariance sigma sigma^T at time t (deterministic models).
  Matrix spot_covariance(double t) const;

 private:
  PathModel() = default;
  int assets_ = 0;
  int drivers_ = 0;
  bool deterministic_sigma_ = false;
  Matrix sigma_const_;
  SigmaTimeFn sigma_fn_;
  std::vector<double> drift_const_;
  DriftFn drift_fn_;
  std::vector<double> x0_;
  std::optional<OuVolFactor> factor_;
};

// Euler path on the fine mesh i/steps, with recorded randomness and
// coefficient evaluations.
struct FinePath {
  int steps = 0;
  int assets = 0;
  int drivers = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // assets x (steps+1), row major by asset
  std::vector<double> dw;      // steps x drivers
  std::vector<double> sigma;   // steps x (assets*drivers), left-endpoint records
  std::vector<double> drift;   // steps x assets, left-endpoint records
  std::vector<double> factor;  // steps+1 factor values when a factor is present

  double dt() const { return 1.0 / steps; }
  double value(int asset, int i) const {
    return values[static_cast<std::size_t>(asset) * (steps + 1) + static_cast<std::size_t>(i)];
  }
};

// Per-asset observations extracted from a fine path.  Grids hold the actual
// (snapped) sample times.
struct ObservationSet {
  std::vector<TimeGrid> grids;
  std::vector<std::vector<double>> values;  // one series per asset
  int fine_steps = 0;
  double max_snap_distance = 0.0;

  int assets() const { return static_cast<int>(grids.size()); }
};

struct NoiseSpec {
  enum class Dist { gaussian, uniform };
  double sd = 0.0;
  Dist dist = Dist::gaussian;
};

// Euler simulation; throws std::runtime_error naming the step if the state
// leaves the representable range.
FinePath simulate_fine(const PathModel& model, int steps, std::uint64_t seed);

// Values at the fine-mesh point nearest below each grid time.  Refuses grids
// finer than the mesh (two grid times snapping to one index), naming the
// step count that would resolve them.
ObservationSet observe(const FinePath& path, const std::vector<TimeGrid>& grids);

// Observations sampled without mesh error: the path is generated directly on
// the common refinement of the given grids, each increment drawn from its
// exact Gaussian law.  Only constant-coefficient models qualify (constant
// sigma, constant drift, no volatility factor); others are refused with a
// pointer to simulate_fine + observe.  One grid per model asset.
ObservationSet simulate_exact(const PathModel& model,
                              const std::vector<TimeGrid>& grids,
                              std::uint64_t seed);

// Adds i.i.d. noise with standard deviation spec.sd to every observation of
// every asset; per-asset streams are derived from (seed, asset).
ObservationSet add_noise(const ObservationSet& obs, const NoiseSpec& spec, std::uint64_t seed);

// Exact integrated covariance \int_0^1 sigma sigma^T dt for deterministic
// models (closed form when constant, high-order quadrature otherwise).
// Stochastic-volatility models are refused; use path_integrated_covariance.
Matrix integrated_covariance_true(const PathModel& model);

// Realised integrated covariance of one simulated path, from the recorded
// sigma evaluations.
Matrix path_integrated_covariance(const FinePath& path);

}  // namespace siml
