#include "siml/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "siml/rng.hpp"

namespace siml {

namespace {

// Composite Gauss-Legendre (10 point) for smooth deterministic integrands.
constexpr double kGl10Node[10] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
constexpr double kGl10Weight[10] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

}  // namespace

PathModel PathModel::constant(Matrix sigma, std::vector<double> drift,
                              std::vector<double> x0) {
  if (sigma.rows() < 1 || sigma.cols() < 1)
    throw std::invalid_argument("PathModel: sigma must be non-empty");
  PathModel m;
  m.assets_ = sigma.rows();
  m.drivers_ = sigma.cols();
  m.deterministic_sigma_ = true;
  m.sigma_const_ = std::move(sigma);
  if (drift.empty()) drift.assign(static_cast<std::size_t>(m.assets_), 0.0);
  if (static_cast<int>(drift.size()) != m.assets_)
    throw std::invalid_argument("PathModel: drift size must match asset count");
  m.drift_const_ = std::move(drift);
  if (x0.empty()) x0.assign(static_cast<std::size_t>(m.assets_), 0.0);
  if (static_cast<int>(x0.size()) != m.assets_)
    throw std::invalid_argument("PathModel: x0 size must match asset count");
  m.x0_ = std::move(x0);
  return m;
}

PathModel PathModel::time_varying(int assets, int drivers, SigmaTimeFn sigma,
                                  DriftFn drift, std::vector<double> x0) {
  if (assets < 1 || drivers < 1)
    throw std::invalid_argument("PathModel: need at least one asset and driver");
  if (!sigma) throw std::invalid_argument("PathModel: sigma callback required");
  PathModel m;
  m.assets_ = assets;
  m.drivers_ = drivers;
  m.deterministic_sigma_ = true;
  m.sigma_fn_ = std::move(sigma);
  m.drift_fn_ = std::move(drift);
  if (!m.drift_fn_) m.drift_const_.assign(static_cast<std::size_t>(assets), 0.0);
  if (x0.empty()) x0.assign(static_cast<std::size_t>(assets), 0.0);
  if (static_cast<int>(x0.size()) != assets)
    throw std::invalid_argument("PathModel: x0 size must match asset count");
  m.x0_ = std::move(x0);
  return m;
}

PathModel PathModel::ou_volatility(Matrix base_sigma, OuVolFactor factor,
                                   std::vector<double> drift, std::vector<double> x0) {
  PathModel m = constant(std::move(base_sigma), std::move(drift), std::move(x0));
  m.deterministic_sigma_ = false;
  m.factor_ = factor;
  return m;
}

void PathModel::eval_sigma(double t, double factor_value, std::span<double> out) const {
  std::size_t n = static_cast<std::size_t>(assets_) * static_cast<std::size_t>(drivers_);
  if (out.size() != n) throw std::invalid_argument("eval_sigma: bad output size");
  if (sigma_fn_) {
    sigma_fn_(t, out);
    return;
  }
  double scale = factor_ ? std::exp(factor_value) : 1.0;
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * sigma_const_.data()[i];
}

void PathModel::eval_drift(double t, std::span<const double> x, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(assets_))
    throw std::invalid_argument("eval_drift: bad output size");
  if (drift_fn_) {
    drift_fn_(t, x, out);
    return;
  }
  for (int j = 0; j < assets_; ++j) out[static_cast<std::size_t>(j)] = drift_const_[static_cast<std::size_t>(j)];
}

Matrix PathModel::spot_covariance(double t) const {
  if (!deterministic_sigma_)
    throw std::invalid_argument(
        "spot_covariance: stochastic volatility has no deterministic spot covariance");
  std::vector<double> s(static_cast<std::size_t>(assets_) * drivers_);
  eval_sigma(t, 0.0, s);
  Matrix c(assets_, assets_);
  for (int j = 0; j < assets_; ++j)
    for (int k = j; k < assets_; ++k) {
      double acc = 0.0;
      for (int r = 0; r < drivers_; ++r)
        acc += s[static_cast<std::size_t>(j) * drivers_ + r] *
               s[static_cast<std::size_t>(k) * drivers_ + r];
      c(j, k) = acc;
      c(k, j) = acc;
    }
  return c;
}

FinePath simulate_fine(const PathModel& model, int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("simulate_fine: steps must be >= 1");
  int assetn = model.assets();
  int drivern = model.drivers();
  FinePath p;
  p.steps = steps;
  p.assets = assetn;
  p.drivers = drivern;
  p.seed = seed;
  p.values.assign(static_cast<std::size_t>(assetn) * (steps + 1), 0.0);
  p.dw.assign(static_cast<std::size_t>(steps) * drivern, 0.0);
  p.sigma.assign(static_cast<std::size_t>(steps) * assetn * drivern, 0.0);
  p.drift.assign(static_cast<std::size_t>(steps) * assetn, 0.0);
  if (model.has_factor()) p.factor.assign(static_cast<std::size_t>(steps) + 1, 0.0);

  double dt = 1.0 / steps;
  double sqdt = std::sqrt(dt);
  Rng rng(seed);

  std::vector<double> x(model.x0());
  for (int j = 0; j < assetn; ++j) p.values[static_cast<std::size_t>(j) * (steps + 1)] = x[static_cast<std::size_t>(j)];
  double f = model.has_factor() ? model.factor().init : 0.0;
  if (model.has_factor()) p.factor[0] = f;

  std::vector<double> sig(static_cast<std::size_t>(assetn) * drivern);
  std::vector<double> b(static_cast<std::size_t>(assetn));

  for (int i = 0; i < steps; ++i) {
    double t = static_cast<double>(i) * dt;
    model.eval_sigma(t, f, sig);
    model.eval_drift(t, x, b);
    for (std::size_t q = 0; q < sig.size(); ++q)
      p.sigma[static_cast<std::size_t>(i) * sig.size() + q] = sig[q];
    for (int j = 0; j < assetn; ++j)
      p.drift[static_cast<std::size_t>(i) * assetn + j] = b[static_cast<std::size_t>(j)];

    // Driver increments first, then (if present) the factor's own increment,
    // in a fixed order so draws are reproducible.
    for (int r = 0; r < drivern; ++r)
      p.dw[static_cast<std::size_t>(i) * drivern + r] = sqdt * rng.normal();
    for (int j = 0; j < assetn; ++j) {
      double dx = b[static_cast<std::size_t>(j)] * dt;
      for (int r = 0; r < drivern; ++r)
        dx += sig[static_cast<std::size_t>(j) * drivern + r] *
              p.dw[static_cast<std::size_t>(i) * drivern + r];
      x[static_cast<std::size_t>(j)] += dx;
      if (!std::isfinite(x[static_cast<std::size_t>(j)]))
        throw std::runtime_error("simulate_fine: non-finite state at step " + std::to_string(i));
      p.values[static_cast<std::size_t>(j) * (steps + 1) + i + 1] = x[static_cast<std::size_t>(j)];
    }
    if (model.has_factor()) {
      const OuVolFactor& of = model.factor();
      f += of.reversion * (of.level - f) * dt + of.vol * sqdt * rng.normal();
      p.factor[static_cast<std::size_t>(i) + 1] = f;
    }
  }
  return p;
}

ObservationSet observe(const FinePath& path, const std::vector<TimeGrid>& grids) {
  if (grids.empty()) throw std::invalid_argument("observe: need at least one grid");
  if (static_cast<int>(grids.size()) > path.assets)
    throw std::invalid_argument("observe: more grids than simulated assets");
  ObservationSet obs;
  obs.fine_steps = path.steps;
  int steps = path.steps;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    const std::vector<double>& t = grids[j].times();
    std::vector<double> snapped(t.size());
    std::vector<double> vals(t.size());
    long prev = -1;
    for (std::size_t k = 0; k < t.size(); ++k) {
      // Left snap with a tiny forward guard so exact mesh multiples stay put.
      double x = t[k] * steps;
      long i = static_cast<long>(std::floor(x + 1e-9));
      if (i < 0) i = 0;
      if (i > steps) i = steps;
      if (i <= prev && k > 0) {
        int needed = static_cast<int>(std::ceil(1.0 / (t[k] - t[k - 1])));
        throw std::invalid_argument(
            "observe: grid finer than the fine mesh near t=" + std::to_string(t[k]) +
            "; at least " + std::to_string(needed) + " steps required");
      }
      prev = i;
      snapped[k] = static_cast<double>(i) / steps;
      obs.max_snap_distance = std::max(obs.max_snap_distance, t[k] - snapped[k]);
      vals[k] = path.value(static_cast<int>(j), static_cast<int>(i));
    }
    snapped.front() = 0.0;
    snapped.back() = 1.0;
    obs.grids.emplace_back(std::move(snapped));
    obs.values.push_back(std::move(vals));
  }
  return obs;
}

ObservationSet add_noise(const ObservationSet& obs, const NoiseSpec& spec, std::uint64_t seed) {
  if (spec.sd < 0.0) throw std::invalid_argument("add_noise: sd must be >= 0");
  ObservationSet out = obs;
  if (spec.sd == 0.0) return out;
  double halfwidth = spec.sd * std::sqrt(3.0);  // uniform with matching sd
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    Rng rng(seed, j);
    for (double& v : out.values[j]) {
      double e = (spec.dist == NoiseSpec::Dist::gaussian)
                     ? spec.sd * rng.normal()
                     : halfwidth * (2.0 * rng.uniform() - 1.0);
      v += e;
    }
  }
  return out;
}

ObservationSet simulate_exact(const PathModel& model,
                              const std::vector<TimeGrid>& grids,
                              std::uint64_t seed) {
  if (grids.empty()) throw std::invalid_argument("simulate_exact: need at least one grid");
  if (static_cast<int>(grids.size()) != model.assets())
    throw std::invalid_argument("simulate_exact: need one grid per model asset");
  if (!model.constant_sigma())
    throw std::invalid_argument(
        "simulate_exact: only constant-coefficient models have exact increment laws; "
        "use simulate_fine + observe for time-varying or stochastic volatility");

  const int assetn = model.assets();
  const int drv = model.drivers();
  TimeGrid refinement = grids[0];
  for (std::size_t j = 1; j < grids.size(); ++j)
    refinement = common_refinement(refinement, grids[j]);

  std::vector<double> sig(static_cast<std::size_t>(assetn) * drv);
  model.eval_sigma(0.0, 0.0, sig);
  std::vector<double> drift(static_cast<std::size_t>(assetn));
  std::vector<double> x = model.x0();
  model.eval_drift(0.0, x, drift);

  ObservationSet obs;
  obs.grids = grids;
  obs.fine_steps = 0;
  std::vector<std::size_t> cursor(grids.size(), 1);
  for (int j = 0; j < assetn; ++j) {
    obs.values.emplace_back();
    obs.values.back().reserve(grids[static_cast<std::size_t>(j)].times().size());
    obs.values.back().push_back(x[static_cast<std::size_t>(j)]);
  }

  Rng rng(seed, 0);
  const std::vector<double>& rt = refinement.times();
  std::vector<double> z(static_cast<std::size_t>(drv));
  for (std::size_t i = 1; i < rt.size(); ++i) {
    const double h = rt[i] - rt[i - 1];
    const double rh = std::sqrt(h);
    for (int k = 0; k < drv; ++k) z[static_cast<std::size_t>(k)] = rh * rng.normal();
    for (int j = 0; j < assetn; ++j) {
      double inc = drift[static_cast<std::size_t>(j)] * h;
      for (int k = 0; k < drv; ++k)
        inc += sig[static_cast<std::size_t>(j) * drv + static_cast<std::size_t>(k)] *
               z[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(j)] += inc;
    }
    // The refinement holds every grid time as an exact double, so equality
    // comparison recovers each asset's observation instants.
    for (std::size_t j = 0; j < grids.size(); ++j) {
      const std::vector<double>& gt = grids[j].times();
      if (cursor[j] < gt.size() && gt[cursor[j]] == rt[i]) {
        obs.values[j].push_back(x[j]);
        ++cursor[j];
      }
    }
  }
  for (std::size_t j = 0; j < grids.size(); ++j) {
    if (cursor[j] != grids[j].times().size())
      throw std::logic_error("simulate_exact: refinement missed a grid time");
  }
  return obs;
}

Matrix integrated_covariance_true(const PathModel& model) {
  if (!model.deterministic_sigma())
    throw std::invalid_argument(
        "integrated_covariance_true: stochastic volatility has no deterministic truth; "
        "use path_integrated_covariance");
  int assetn = model.assets();
  Matrix acc(assetn, assetn);
  // 64 panels x 10-point Gauss-Legendre; exact for the constant case and
  // ~1e-15 for smooth time-varying coefficients.
  int panels = 64;
  for (int p = 0; p < panels; ++p) {
    double lo = static_cast<double>(p) / panels;
    double hi = static_cast<double>(p + 1) / panels;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int q = 0; q < 10; ++q) {
      Matrix c = model.spot_covariance(mid + half * kGl10Node[q]);
      double w = kGl10Weight[q] * half;
      for (int j = 0; j < assetn; ++j)
        for (int k = 0; k < assetn; ++k) acc(j, k) += w * c(j, k);
    }
  }
  return acc;
}

Matrix path_integrated_covariance(const FinePath& path) {
  int assetn = path.assets;
  int drivern = path.drivers;
  Matrix acc(assetn, assetn);
  double dt = path.dt();
  for (int i = 0; i < path.steps; ++i) {
    const double* s = path.sigma.data() + static_cast<std::size_t>(i) * assetn * drivern;
    for (int j = 0; j < assetn; ++j)
      for (int k = j; k < assetn; ++k) {
        double v = 0.0;
        for (int r = 0; r < drivern; ++r)
          v += s[static_cast<std::size_t>(j) * drivern + r] *
               s[static_cast<std::size_t>(k) * drivern + r];
        acc(j, k) += v * dt;
      }
  }
  for (int j = 0; j < assetn; ++j)
    for (int k = 0; k < j; ++k) acc(j, k) = acc(k, j);
  return acc;
}

}  // namespace siml
