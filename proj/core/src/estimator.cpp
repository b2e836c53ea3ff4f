#include "siml/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace siml {

namespace {

void require_asset_index(const ObservationSet& obs, int asset, const char* who) {
  if (asset < 0 || asset >= obs.assets()) {
    throw std::invalid_argument(std::string(who) + ": asset index " +
                                std::to_string(asset) + " out of range for " +
                                std::to_string(obs.assets()) + " assets");
  }
}

std::vector<double> increments_of(const std::vector<double>& values) {
  std::vector<double> dy(values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    dy[k] = values[k + 1] - values[k];
  }
  return dy;
}

}  // namespace

double prefactor_value(int n_j, int n_jp, PrefactorConvention convention) {
  if (n_j < 1 || n_jp < 1) {
    throw std::invalid_argument("prefactor_value: interval counts must be >= 1");
  }
  if (convention == PrefactorConvention::asymptotic) {
    return 2.0;
  }
  const double a = static_cast<double>(n_j);
  const double b = static_cast<double>(n_jp);
  return 2.0 * std::sqrt(a * b) / std::sqrt((a + 0.5) * (b + 0.5));
}

int choose_m(int n, double c, double alpha) {
  if (n < 1) {
    throw std::invalid_argument("choose_m: n must be >= 1");
  }
  if (!(c > 0.0) || !(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument(
        "choose_m: require c > 0 and alpha in (0, 1]");
  }
  const int m = static_cast<int>(std::floor(c * std::pow(static_cast<double>(n), alpha)));
  return std::max(1, m);
}

Matrix siml_equispaced(const ObservationSet& obs, KernelOrder m) {
  const int assets = obs.assets();
  if (assets == 0) {
    throw std::invalid_argument("siml_equispaced: no observations");
  }
  int n_min = 0;
  for (int j = 0; j < assets; ++j) {
    const TimeGrid& grid = obs.grids[j];
    if (!grid.is_uniform()) {
      throw std::invalid_argument(
          "siml_equispaced: grid for asset " + std::to_string(j) +
          " is not uniform; use siml_general with explicit sampling maps");
    }
    const int n = grid.intervals();
    n_min = (j == 0) ? n : std::min(n_min, n);
  }
  if (m.value() > n_min) {
    throw std::invalid_argument(
        "siml_equispaced: truncation order " + std::to_string(m.value()) +
        " exceeds smallest interval count " + std::to_string(n_min));
  }

  // z^j_l = sum_k p^{n_j}_{k,l} (Y_k - Y_{k-1}) with orthonormal weights.
  std::vector<std::vector<double>> z(assets, std::vector<double>(m.value(), 0.0));
  for (int j = 0; j < assets; ++j) {
    const int n = obs.grids[j].intervals();
    const std::vector<double> dy = increments_of(obs.values[j]);
    for (int k = 1; k <= n; ++k) {
      const double d = dy[k - 1];
      for (int l = 1; l <= m.value(); ++l) {
        z[j][l - 1] += cos_basis_weight(n, k, l) * d;
      }
    }
  }

  Matrix v(assets, assets, 0.0);
  for (int j = 0; j < assets; ++j) {
    for (int jp = j; jp < assets; ++jp) {
      const double scale =
          std::sqrt(static_cast<double>(obs.grids[j].intervals()) *
                    static_cast<double>(obs.grids[jp].intervals())) /
          static_cast<double>(m.value());
      double acc = 0.0;
      for (int l = 0; l < m.value(); ++l) {
        acc += z[j][l] * z[jp][l];
      }
      v(j, jp) = scale * acc;
      v(jp, j) = v(j, jp);
    }
  }
  return v;
}

EstimateReport siml_general(const ObservationSet& obs, const SimlConfig& cfg) {
  const int assets = obs.assets();
  if (assets == 0) {
    throw std::invalid_argument("siml_general: no observations");
  }
  if (static_cast<int>(cfg.maps.size()) != assets) {
    throw std::invalid_argument(
        "siml_general: need one sampling map per asset (" +
        std::to_string(cfg.maps.size()) + " maps for " +
        std::to_string(assets) + " assets)");
  }
  for (int j = 0; j < assets; ++j) {
    if (cfg.maps[j].grid().times() != obs.grids[j].times()) {
      throw std::invalid_argument(
          "siml_general: sampling map for asset " + std::to_string(j) +
          " was built on a different grid than the observations");
    }
    const MapValidation check = validate_map(cfg.maps[j]);
    if (!check.valid) {
      throw std::invalid_argument(
          "siml_general: sampling map for asset " + std::to_string(j) +
          " is not admissible (interval " + std::to_string(check.interval) + ")");
    }
  }

  const int m = cfg.m.value();
  std::vector<std::vector<double>> w(assets, std::vector<double>(m, 0.0));
  std::vector<int> counts(assets, 0);
  for (int j = 0; j < assets; ++j) {
    const std::vector<double>& reps = cfg.maps[j].reps();
    const std::vector<double> dy = increments_of(obs.values[j]);
    counts[j] = static_cast<int>(reps.size());
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const double d = dy[k];
      const double rep = reps[k];
      for (int l = 1; l <= m; ++l) {
        w[j][l - 1] += std::cos((static_cast<double>(l) - 0.5) * kPi * rep) * d;
      }
    }
  }

  EstimateReport report;
  report.m = m;
  report.counts = counts;
  report.v = Matrix(assets, assets, 0.0);
  for (int j = 0; j < assets; ++j) {
    for (int jp = j; jp < assets; ++jp) {
      const double pref = prefactor_value(counts[j], counts[jp], cfg.prefactor);
      double acc = 0.0;
      for (int l = 0; l < m; ++l) {
        acc += w[j][l] * w[jp][l];
      }
      report.v(j, jp) = pref * acc / static_cast<double>(m);
      report.v(jp, j) = report.v(j, jp);
    }
  }
  return report;
}

std::complex<double> mmf_estimate(const ObservationSet& obs, KernelOrder m, int q,
                                  int asset_a, int asset_b) {
  require_asset_index(obs, asset_a, "mmf_estimate");
  require_asset_index(obs, asset_b, "mmf_estimate");
  const std::vector<double>& ta = obs.grids[asset_a].times();
  const std::vector<double>& tb = obs.grids[asset_b].times();
  const std::vector<double> dya = increments_of(obs.values[asset_a]);
  const std::vector<double> dyb = increments_of(obs.values[asset_b]);

  std::complex<double> acc(0.0, 0.0);
  for (int l = 1; l <= m.value(); ++l) {
    std::complex<double> fa(0.0, 0.0);
    for (std::size_t k = 0; k < dya.size(); ++k) {
      fa += std::polar(1.0, 2.0 * kPi * static_cast<double>(l + q) * ta[k]) * dya[k];
    }
    std::complex<double> fb(0.0, 0.0);
    for (std::size_t k = 0; k < dyb.size(); ++k) {
      fb += std::polar(1.0, -2.0 * kPi * static_cast<double>(l) * tb[k]) * dyb[k];
    }
    acc += fa * fb;
  }
  return acc / static_cast<double>(m.value());
}

Matrix realized_covariance(const ObservationSet& obs) {
  const int assets = obs.assets();
  if (assets == 0) {
    throw std::invalid_argument("realized_covariance: no observations");
  }
  for (int j = 1; j < assets; ++j) {
    if (obs.grids[j].times() != obs.grids[0].times()) {
      throw std::invalid_argument(
          "realized_covariance: requires a common observation grid; asset " +
          std::to_string(j) + " is sampled asynchronously");
    }
  }
  const int n = obs.grids[0].intervals();
  std::vector<std::vector<double>> dy(assets);
  for (int j = 0; j < assets; ++j) {
    dy[j] = increments_of(obs.values[j]);
  }
  Matrix v(assets, assets, 0.0);
  for (int j = 0; j < assets; ++j) {
    for (int jp = j; jp < assets; ++jp) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += dy[j][k] * dy[jp][k];
      }
      v(j, jp) = acc;
      v(jp, j) = acc;
    }
  }
  return v;
}

Matrix bias_center(const PathModel& model, const SimlConfig& cfg) {
  if (!model.deterministic_sigma()) {
    throw std::invalid_argument(
        "bias_center: requires deterministic volatility; stochastic-factor "
        "models have no closed-form centring");
  }
  const int assets = static_cast<int>(cfg.maps.size());
  if (assets == 0) {
    throw std::invalid_argument("bias_center: no sampling maps");
  }
  if (model.assets() != assets) {
    throw std::invalid_argument(
        "bias_center: model has " + std::to_string(model.assets()) +
        " assets but " + std::to_string(assets) + " maps were supplied");
  }

  Matrix center(assets, assets, 0.0);
  for (int j = 0; j < assets; ++j) {
    for (int jp = j; jp < assets; ++jp) {
      ScalarIntegrand g =
          model.constant_sigma()
              ? ScalarIntegrand::constant(model.spot_covariance(0.0)(j, jp))
              : ScalarIntegrand::of([&model, j, jp](double s) {
                  return model.spot_covariance(s)(j, jp);
                });
      const double bar = diagonal_integral(cfg.m, cfg.maps[j], cfg.maps[jp], g);
      const int n_j = cfg.maps[j].grid().intervals();
      const int n_jp = cfg.maps[jp].grid().intervals();
      const double pref = prefactor_value(n_j, n_jp, cfg.prefactor);
      // E V^{jj'} = (pref / 2) * (2/m) sum_l sum_{k,k'} cos cos |I_k cap I_k'|-weighted
      // spot covariance, and the double sum is exactly the diagonal integral.
      center(j, jp) = 0.5 * pref * bar;
      center(jp, j) = center(j, jp);
    }
  }
  return center;
}

}  // namespace siml
