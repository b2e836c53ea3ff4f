#include "siml/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "siml/estimator.hpp"
#include "siml/parallel.hpp"
#include "siml/rng.hpp"
#include "siml/stats.hpp"

namespace siml {
namespace {

// Reported covariance entry: the variance for one asset, the cross term
// for two or more.
std::pair<int, int> report_entry(int assets) { return {0, assets > 1 ? 1 : 0}; }

std::vector<SchemeRule> resolved_schemes(const ExperimentConfig& cfg, int assets) {
  if (cfg.schemes.empty())
    return std::vector<SchemeRule>(static_cast<std::size_t>(assets), SchemeRule::ksss);
  if (cfg.schemes.size() == 1)
    return std::vector<SchemeRule>(static_cast<std::size_t>(assets), cfg.schemes.front());
  if (static_cast<int>(cfg.schemes.size()) != assets)
    throw std::invalid_argument("experiment: one scheme per asset required");
  return cfg.schemes;
}

void validate_common(const ExperimentConfig& cfg, const PathModel& model,
                     const std::vector<SchemeRule>& schemes) {
  if (cfg.replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
  if (cfg.n_list.empty()) throw std::invalid_argument("experiment: n-list must not be empty");
  if (cfg.steps_per_obs < 1)
    throw std::invalid_argument("experiment: steps-per-obs must be >= 1");
  if (cfg.grid == GridKind::poisson) {
    for (SchemeRule s : schemes) {
      if (s == SchemeRule::ksss)
        throw std::invalid_argument(
            "experiment: ksss representatives sit outside the cells of irregular grids; "
            "use left or midpoint with poisson grids");
    }
    if (!model.constant_sigma())
      throw std::invalid_argument(
          "experiment: poisson sampling draws exact increments and needs a constant model");
  }
}

// Per-replication results for one grid size.  Randomness is derived from
// (seed, 4 * <n index> + purpose, replication): purpose 0 drives the path,
// 1 the noise, 2 the poisson grids.  Slots are written per replication, so
// any thread count yields the same bytes.
struct CellData {
  int m = 0;
  bool has_center = false;
  std::vector<double> v;
  std::vector<double> truth;
  std::vector<double> center;
  std::vector<double> rv;
};

CellData run_cell(const ExperimentConfig& cfg, const PathModel& model,
                  const std::vector<SchemeRule>& schemes, std::size_t ni, int n,
                  bool want_rv) {
  const int assets = model.assets();
  const auto [a, b] = report_entry(assets);
  const long reps = cfg.replications;
  CellData cell;
  cell.m = cfg.m_rule.resolve(n);
  cell.has_center = model.deterministic_sigma();
  cell.v.assign(static_cast<std::size_t>(reps), 0.0);
  cell.truth.assign(static_cast<std::size_t>(reps), 0.0);
  cell.center.assign(static_cast<std::size_t>(reps), 0.0);
  if (want_rv) cell.rv.assign(static_cast<std::size_t>(reps), 0.0);
  const std::uint64_t base = 4 * static_cast<std::uint64_t>(ni);

  if (cfg.grid == GridKind::uniform) {
    const TimeGrid grid = make_uniform_grid(n);
    const std::vector<TimeGrid> grids(static_cast<std::size_t>(assets), grid);
    std::vector<SamplingMap> maps;
    for (int j = 0; j < assets; ++j)
      maps.push_back(sampling_map(grid, schemes[static_cast<std::size_t>(j)]));
    const SimlConfig scfg{KernelOrder(cell.m), std::move(maps)};
    double fixed_truth = 0.0;
    double fixed_center = 0.0;
    if (model.deterministic_sigma()) {
      fixed_truth = integrated_covariance_true(model)(a, b);
      fixed_center = bias_center(model, scfg)(a, b);
    }
    const int steps = cfg.steps_per_obs * n;
    parallel_for(reps, cfg.threads, [&](long r) {
      const std::size_t slot = static_cast<std::size_t>(r);
      FinePath path = simulate_fine(model, steps,
                                    mix_streams(cfg.seed, base, static_cast<std::uint64_t>(r)));
      ObservationSet obs = observe(path, grids);
      if (cfg.noise.sd > 0.0)
        obs = add_noise(obs, cfg.noise,
                        mix_streams(cfg.seed, base + 1, static_cast<std::uint64_t>(r)));
      cell.v[slot] = siml_general(obs, scfg).v(a, b);
      cell.truth[slot] = model.deterministic_sigma()
                             ? fixed_truth
                             : path_integrated_covariance(path)(a, b);
      cell.center[slot] = fixed_center;
      if (want_rv) cell.rv[slot] = realized_covariance(obs)(a, b);
    });
  } else {
    const double fixed_truth = integrated_covariance_true(model)(a, b);
    parallel_for(reps, cfg.threads, [&](long r) {
      const std::size_t slot = static_cast<std::size_t>(r);
      const std::uint64_t grid_master =
          mix_streams(cfg.seed, base + 2, static_cast<std::uint64_t>(r));
      std::vector<TimeGrid> grids;
      for (int j = 0; j < assets; ++j)
        grids.push_back(
            make_poisson_grid(n, mix_streams(grid_master, static_cast<std::uint64_t>(j))));
      ObservationSet obs =
          simulate_exact(model, grids, mix_streams(cfg.seed, base, static_cast<std::uint64_t>(r)));
      if (cfg.noise.sd > 0.0)
        obs = add_noise(obs, cfg.noise,
                        mix_streams(cfg.seed, base + 1, static_cast<std::uint64_t>(r)));
      std::vector<SamplingMap> maps;
      for (int j = 0; j < assets; ++j)
        maps.push_back(sampling_map(obs.grids[static_cast<std::size_t>(j)],
                                    schemes[static_cast<std::size_t>(j)]));
      const SimlConfig scfg{KernelOrder(cell.m), std::move(maps)};
      cell.v[slot] = siml_general(obs, scfg).v(a, b);
      cell.truth[slot] = fixed_truth;
      cell.center[slot] = bias_center(model, scfg)(a, b);
    });
  }
  return cell;
}

McRow summarize(const CellData& cell, int n) {
  McRow row;
  row.n = n;
  row.m = cell.m;
  row.truth = mean(cell.truth);
  row.center = mean(cell.center);
  row.mean = mean(cell.v);
  std::vector<double> err(cell.v.size());
  double sq = 0.0;
  for (std::size_t r = 0; r < cell.v.size(); ++r) {
    err[r] = cell.v[r] - cell.truth[r];
    sq += err[r] * err[r];
  }
  row.bias = mean(err);
  row.rmse = std::sqrt(sq / static_cast<double>(err.size()));
  if (cell.v.size() > 1) {
    const double var = sample_variance(cell.v);
    row.se = std::sqrt(var / static_cast<double>(cell.v.size()));
    row.m_var = static_cast<double>(cell.m) * var;
  }
  return row;
}

// Limit variance of the scaled error sqrt(m) (V^{ab} - centring):
// the time integral of Sigma_aa Sigma_bb + Sigma_ab^2 over [0, 1].
double limit_variance(const PathModel& model, int a, int b) {
  ScalarIntegrand f = ScalarIntegrand::of([&model, a, b](double s) {
    Matrix sig = model.spot_covariance(s);
    return sig(a, a) * sig(b, b) + sig(a, b) * sig(a, b);
  });
  double acc = 0.0;
  const int panels = 32;
  for (int p = 0; p < panels; ++p)
    acc += f.integral(static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
  return acc;
}

}  // namespace

McSummary run_consistency(const ExperimentConfig& cfg) {
  const PathModel model = cfg.model.build();
  const std::vector<SchemeRule> schemes = resolved_schemes(cfg, model.assets());
  validate_common(cfg, model, schemes);
  McSummary out;
  std::tie(out.asset_a, out.asset_b) = report_entry(model.assets());
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    CellData cell = run_cell(cfg, model, schemes, ni, cfg.n_list[ni], false);
    out.rows.push_back(summarize(cell, cfg.n_list[ni]));
  }
  return out;
}

McSummary run_normality(const ExperimentConfig& cfg) {
  const PathModel model = cfg.model.build();
  if (!model.deterministic_sigma())
    throw std::invalid_argument(
        "distribution run needs deterministic volatility: under stochastic volatility the "
        "scaled error converges to a mixed normal with random variance, so no fixed "
        "reference law applies; run the consistency experiment instead");
  const std::vector<SchemeRule> schemes = resolved_schemes(cfg, model.assets());
  validate_common(cfg, model, schemes);
  if (cfg.replications < 2)
    throw std::invalid_argument("distribution run needs at least two replications");

  McSummary out;
  std::tie(out.asset_a, out.asset_b) = report_entry(model.assets());
  out.sd_theory = std::sqrt(limit_variance(model, out.asset_a, out.asset_b));
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    CellData cell = run_cell(cfg, model, schemes, ni, cfg.n_list[ni], false);
    McRow row = summarize(cell, cfg.n_list[ni]);
    const double root_m = std::sqrt(static_cast<double>(cell.m));
    std::vector<double> scaled(cell.v.size());
    for (std::size_t r = 0; r < cell.v.size(); ++r) {
      const double centre =
          cfg.center == CenterRule::truth ? cell.truth[r] : cell.center[r];
      scaled[r] = root_m * (cell.v[r] - centre);
    }
    row.m_var = sample_variance(scaled);
    row.standardized.resize(scaled.size());
    for (std::size_t r = 0; r < scaled.size(); ++r)
      row.standardized[r] = scaled[r] / out.sd_theory;
    row.ks_stat = ks_statistic(row.standardized);
    row.ks_p = ks_pvalue(row.ks_stat, row.standardized.size());
    out.rows.push_back(std::move(row));
  }
  return out;
}

NoiseComparison run_noise_comparison(const ExperimentConfig& cfg) {
  const PathModel model = cfg.model.build();
  if (cfg.grid != GridKind::uniform)
    throw std::invalid_argument(
        "noise comparison needs synchronous (uniform) grids: the plain sum of increment "
        "products is only defined on common sample times");
  const std::vector<SchemeRule> schemes = resolved_schemes(cfg, model.assets());
  validate_common(cfg, model, schemes);

  NoiseComparison out;
  std::tie(out.asset_a, out.asset_b) = report_entry(model.assets());
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    CellData cell = run_cell(cfg, model, schemes, ni, cfg.n_list[ni], true);
    const McRow row = summarize(cell, cfg.n_list[ni]);
    NoiseRow nr;
    nr.n = row.n;
    nr.m = row.m;
    nr.truth = row.truth;
    nr.siml_mean = row.mean;
    nr.siml_bias = row.bias;
    nr.siml_se = row.se;
    nr.rv_mean = mean(cell.rv);
    double err_acc = 0.0;
    for (std::size_t r = 0; r < cell.rv.size(); ++r)
      err_acc += cell.rv[r] - cell.truth[r];
    nr.rv_bias = err_acc / static_cast<double>(cell.rv.size());
    if (cell.rv.size() > 1)
      nr.rv_se = std::sqrt(sample_variance(cell.rv) / static_cast<double>(cell.rv.size()));
    out.rows.push_back(nr);
  }
  return out;
}

}  // namespace siml
