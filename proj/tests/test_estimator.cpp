#include "siml/estimator.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "siml/rng.hpp"
#include "siml/simulate.hpp"

using namespace siml;

namespace {

// Observation set on explicit grids with externally supplied values.
ObservationSet make_obs(std::vector<TimeGrid> grids,
                        std::vector<std::vector<double>> values) {
  ObservationSet obs;
  obs.grids = std::move(grids);
  obs.values = std::move(values);
  return obs;
}

std::vector<double> random_walk(int n, Rng& rng, double step_sd) {
  std::vector<double> y(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    y[k] = y[k - 1] + step_sd * rng.normal();
  }
  return y;
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("single increment recovers the squared jump") {
  // One interval, one frequency: the orthonormal weight is exactly 1, so the
  // estimate is the squared increment.
  auto obs = make_obs({make_uniform_grid(1)}, {{0.0, 0.7}});
  Matrix v = siml_equispaced(obs, KernelOrder(1));
  CHECK(v(0, 0) == doctest::Approx(0.49).epsilon(1e-15));

  SimlConfig cfg{KernelOrder(1), {sampling_map(obs.grids[0], SchemeRule::ksss)}};
  EstimateReport rep = siml_general(obs, cfg);
  CHECK(rep.v(0, 0) == doctest::Approx(0.49).epsilon(1e-14));
  CHECK(rep.counts == std::vector<int>{1});
  CHECK(rep.m == 1);
}

TEST_CASE("orthonormal and representative forms agree on uniform grids") {
  // The orthonormal-weight form and the general form with (2k-1)/(2n+1)
  // representatives are algebraically identical; the two code paths use
  // different expression trees, so agreement to 1e-10 relative is the check.
  Rng rng(20260823u);
  for (int trial = 0; trial < 15; ++trial) {
    const int n0 = 32 + static_cast<int>(rng.uniform() * 1400);
    const int n1 = 32 + static_cast<int>(rng.uniform() * 1400);
    const int n_min = std::min(n0, n1);
    const int m = 1 + static_cast<int>(rng.uniform() * std::min(n_min, 60));
    auto obs = make_obs({make_uniform_grid(n0), make_uniform_grid(n1)},
                        {random_walk(n0, rng, 0.01), random_walk(n1, rng, 0.015)});
    Matrix a = siml_equispaced(obs, KernelOrder(m));
    SimlConfig cfg{KernelOrder(m),
                   {sampling_map(obs.grids[0], SchemeRule::ksss),
                    sampling_map(obs.grids[1], SchemeRule::ksss)}};
    Matrix b = siml_general(obs, cfg).v;
    for (int j = 0; j < 2; ++j) {
      for (int jp = 0; jp < 2; ++jp) {
        CHECK(a(j, jp) == doctest::Approx(b(j, jp)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("estimate is symmetric and positive semidefinite") {
  Rng rng(7u);
  TimeGrid ga = make_poisson_grid(300.0, 11u);
  TimeGrid gb = make_uniform_grid(257);
  auto obs = make_obs({ga, gb},
                      {random_walk(ga.intervals(), rng, 0.01),
                       random_walk(gb.intervals(), rng, 0.01)});
  SimlConfig cfg{KernelOrder(12),
                 {sampling_map(ga, SchemeRule::left), sampling_map(gb, SchemeRule::left)}};
  Matrix v = siml_general(obs, cfg).v;
  CHECK(v(0, 1) == v(1, 0));
  const double det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
  CHECK(det >= -1e-15 * v(0, 0) * v(1, 1));
  CHECK(v(0, 0) >= 0.0);
  CHECK(v(1, 1) >= 0.0);
}

TEST_CASE("quadratic scale equivariance is exact for power-of-two factors") {
  Rng rng(5u);
  const int n = 200;
  auto obs = make_obs({make_uniform_grid(n)}, {random_walk(n, rng, 0.01)});
  auto scaled = obs;
  for (double& y : scaled.values[0]) y *= 4.0;

  Matrix v = siml_equispaced(obs, KernelOrder(9));
  Matrix vs = siml_equispaced(scaled, KernelOrder(9));
  CHECK(vs(0, 0) == 16.0 * v(0, 0));

  SimlConfig cfg{KernelOrder(9), {sampling_map(obs.grids[0], SchemeRule::midpoint)}};
  CHECK(siml_general(scaled, cfg).v(0, 0) == 16.0 * siml_general(obs, cfg).v(0, 0));
}

TEST_CASE("level shifts leave the estimate unchanged") {
  // Prices on a dyadic lattice shifted by 100 keep exact increments, so the
  // estimate must be bit-identical.
  Rng rng(9u);
  const int n = 300;
  std::vector<double> y(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    const double tick = std::floor(rng.uniform() * 7.0) - 3.0;
    y[k] = y[k - 1] + tick * 0.0009765625;  // 2^-10
  }
  auto obs = make_obs({make_uniform_grid(n)}, {y});
  auto shifted = obs;
  for (double& v : shifted.values[0]) v += 100.0;
  CHECK(siml_equispaced(shifted, KernelOrder(14))(0, 0) ==
        siml_equispaced(obs, KernelOrder(14))(0, 0));
}

TEST_CASE("preconditions are enforced with actionable messages") {
  Rng rng(3u);
  auto uni = make_obs({make_uniform_grid(8)}, {random_walk(8, rng, 0.1)});
  CHECK_THROWS_WITH_AS(siml_equispaced(uni, KernelOrder(9)),
                       doctest::Contains("exceeds smallest interval count"),
                       std::invalid_argument);

  TimeGrid irregular({0.0, 0.3, 0.55, 1.0});
  auto irr = make_obs({irregular}, {{0.0, 0.1, -0.05, 0.2}});
  CHECK_THROWS_WITH_AS(siml_equispaced(irr, KernelOrder(2)),
                       doctest::Contains("siml_general"), std::invalid_argument);

  SimlConfig no_maps{KernelOrder(2), {}};
  CHECK_THROWS_AS(siml_general(irr, no_maps), std::invalid_argument);

  SimlConfig wrong_grid{KernelOrder(2), {sampling_map(make_uniform_grid(3), SchemeRule::left)}};
  CHECK_THROWS_WITH_AS(siml_general(irr, wrong_grid),
                       doctest::Contains("different grid"), std::invalid_argument);

  // Equal adjacent representatives violate admissibility.
  SamplingMap bad(irregular, {0.3, 0.3, 0.9});
  SimlConfig bad_cfg{KernelOrder(2), {bad}};
  CHECK_THROWS_WITH_AS(siml_general(irr, bad_cfg),
                       doctest::Contains("not admissible"), std::invalid_argument);
}

TEST_CASE("truncation-order rule") {
  CHECK(choose_m(8192, 1.0, 0.4) == 36);
  CHECK(choose_m(2048, 1.0, 0.4) == 21);
  CHECK(choose_m(1, 1.0, 0.4) == 1);
  CHECK(choose_m(1000, 0.5, 0.4) == 7);
  CHECK_THROWS_AS(choose_m(0, 1.0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(choose_m(100, -1.0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(choose_m(100, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("prefactor conventions") {
  CHECK(prefactor_value(8, 8, PrefactorConvention::finite_sample) ==
        doctest::Approx(32.0 / 17.0).epsilon(1e-15));
  CHECK(prefactor_value(8, 8, PrefactorConvention::asymptotic) == 2.0);
  CHECK(prefactor_value(4, 9, PrefactorConvention::finite_sample) ==
        doctest::Approx(2.0 * 6.0 / std::sqrt(4.5 * 9.5)).epsilon(1e-15));

  // Switching conventions rescales the estimate by exactly 2 / prefactor.
  Rng rng(13u);
  const int n = 64;
  auto obs = make_obs({make_uniform_grid(n)}, {random_walk(n, rng, 0.02)});
  SimlConfig fin{KernelOrder(5), {sampling_map(obs.grids[0], SchemeRule::ksss)}};
  SimlConfig asy = fin;
  asy.prefactor = PrefactorConvention::asymptotic;
  const double ratio = siml_general(obs, asy).v(0, 0) / siml_general(obs, fin).v(0, 0);
  CHECK(ratio == doctest::Approx((n + 0.5) / n).epsilon(1e-13));
}

TEST_CASE("realized covariance sums synchronous increment products") {
  auto obs = make_obs({make_uniform_grid(2), make_uniform_grid(2)},
                      {{0.0, 0.3, 0.1}, {0.0, -0.2, 0.2}});
  Matrix v = realized_covariance(obs);
  CHECK(v(0, 0) == doctest::Approx(0.09 + 0.04).epsilon(1e-15));
  CHECK(v(1, 1) == doctest::Approx(0.04 + 0.16).epsilon(1e-15));
  CHECK(v(0, 1) == doctest::Approx(0.3 * (-0.2) + (-0.2) * 0.4).epsilon(1e-13));
  CHECK(v(0, 1) == v(1, 0));

  auto async = make_obs({make_uniform_grid(2), make_uniform_grid(3)},
                        {{0.0, 0.3, 0.1}, {0.0, 0.1, 0.2, 0.3}});
  CHECK_THROWS_WITH_AS(realized_covariance(async),
                       doctest::Contains("asynchronously"), std::invalid_argument);
}

TEST_CASE("fourier estimator matches a hand-evaluated two-step case") {
  const double a = 0.4;
  const double b = -0.1;
  auto obs = make_obs({make_uniform_grid(2)}, {{0.0, a, b}});
  // m = 1, q = 0: both factors reduce to a - (b - a) = 2a - b.
  std::complex<double> v0 = mmf_estimate(obs, KernelOrder(1), 0);
  CHECK(v0.real() == doctest::Approx((2.0 * a - b) * (2.0 * a - b)).epsilon(1e-13));
  CHECK(std::fabs(v0.imag()) < 1e-14);
  // q = 1 shifts only the first factor: e^{2 pi i} restores the plain sum b.
  std::complex<double> v1 = mmf_estimate(obs, KernelOrder(1), 1);
  CHECK(v1.real() == doctest::Approx(b * (2.0 * a - b)).epsilon(1e-12));

  CHECK_THROWS_AS(mmf_estimate(obs, KernelOrder(1), 0, 2, 0), std::invalid_argument);
}

TEST_CASE("fourier estimator is consistent for brownian motion" * doctest::timeout(120)) {
  PathModel model = PathModel::constant(Matrix(1, 1, 0.2));
  const int n = 1024;
  const int reps = 150;
  std::vector<TimeGrid> grids{make_uniform_grid(n)};
  double mean_re = 0.0;
  double mean_im = 0.0;
  std::vector<double> re(reps);
  for (int r = 0; r < reps; ++r) {
    FinePath path = simulate_fine(model, n, 4000u + static_cast<std::uint64_t>(r));
    ObservationSet obs = observe(path, grids);
    std::complex<double> v = mmf_estimate(obs, KernelOrder(32), 0);
    re[r] = v.real();
    mean_re += v.real();
    mean_im += v.imag();
  }
  mean_re /= reps;
  mean_im /= reps;
  double var = 0.0;
  for (double x : re) var += (x - mean_re) * (x - mean_re);
  const double se = std::sqrt(var / (reps - 1.0) / reps);
  CHECK(std::fabs(mean_re - 0.04) < 5.0 * se);
  CHECK(std::fabs(mean_im) < 0.02);
}

TEST_CASE("monte carlo mean matches the analytic centring" * doctest::timeout(120)) {
  // With uniform grids and (2k-1)/(2n+1) representatives the centring matrix
  // collapses to the true integrated variance, so the estimator is exactly
  // unbiased for Brownian motion.
  const int n = 256;
  const int m = 16;
  PathModel model = PathModel::constant(Matrix(1, 1, 0.2));
  SimlConfig cfg{KernelOrder(m), {sampling_map(make_uniform_grid(n), SchemeRule::ksss)}};
  Matrix center = bias_center(model, cfg);
  CHECK(center(0, 0) == doctest::Approx(0.04).epsilon(1e-13));

  const int reps = 500;
  std::vector<TimeGrid> grids{make_uniform_grid(n)};
  double mean = 0.0;
  std::vector<double> vals(reps);
  for (int r = 0; r < reps; ++r) {
    FinePath path = simulate_fine(model, n, 9000u + static_cast<std::uint64_t>(r));
    vals[r] = siml_equispaced(observe(path, grids), KernelOrder(m))(0, 0);
    mean += vals[r];
  }
  mean /= reps;
  // Exact sampling distribution is 0.04 * chi^2_m / m.
  const double se = 0.04 * std::sqrt(2.0 / m) / std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(mean - center(0, 0)) < 4.0 * se);
}

TEST_CASE("centring identities for structured maps") {
  const double c2 = 0.09;
  PathModel model = PathModel::constant(Matrix(1, 1, 0.3));

  // Left representatives, m = 2n: diagonal integral is 1 + 1/n.
  {
    const int n = 24;
    TimeGrid grid = make_uniform_grid(n);
    SimlConfig cfg{KernelOrder(2 * n), {sampling_map(grid, SchemeRule::left)}};
    Matrix center = bias_center(model, cfg);
    const double pref = prefactor_value(n, n, PrefactorConvention::finite_sample);
    CHECK(center(0, 0) ==
          doctest::Approx(0.5 * pref * (1.0 + 1.0 / n) * c2).epsilon(1e-12));
  }

  // Left against right representatives, m = 2n: the cross centring vanishes.
  {
    const int n = 16;
    TimeGrid grid = make_uniform_grid(n);
    PathModel two = PathModel::constant([] {
      Matrix s(2, 2, 0.0);
      s(0, 0) = 0.2;
      s(1, 0) = 0.1;
      s(1, 1) = 0.1 * std::sqrt(3.0);
      return s;
    }());
    SimlConfig cfg{KernelOrder(2 * n),
                   {sampling_map(grid, SchemeRule::left), sampling_map(grid, SchemeRule::right)}};
    Matrix center = bias_center(two, cfg);
    CHECK(std::fabs(center(0, 1)) < 1e-14);
    CHECK(center(0, 1) == center(1, 0));
  }

  // Time-varying volatility: cross-check against a fine Riemann sum of the
  // sampled kernel times the spot variance.
  {
    const int n = 64;
    const int m = 8;
    PathModel tv = PathModel::time_varying(
        1, 1, [](double t, std::span<double> out) { out[0] = 0.2 + 0.1 * t; });
    TimeGrid grid = make_uniform_grid(n);
    SamplingMap map = sampling_map(grid, SchemeRule::ksss);
    SimlConfig cfg{KernelOrder(m), {map}};
    Matrix center = bias_center(tv, cfg);

    const int points = 50000;
    double riemann = 0.0;
    for (int i = 0; i < points; ++i) {
      const double s = (i + 0.5) / points;
      const double sig = 0.2 + 0.1 * s;
      riemann += kernel_sampled(s, s, KernelOrder(m), map, map) * sig * sig;
    }
    riemann /= points;
    const double pref = prefactor_value(n, n, PrefactorConvention::finite_sample);
    CHECK(center(0, 0) == doctest::Approx(0.5 * pref * riemann).epsilon(2e-4));
  }

  // Stochastic volatility has no deterministic centring.
  PathModel sv = PathModel::ou_volatility(Matrix(1, 1, 0.2), OuVolFactor{});
  SimlConfig cfg{KernelOrder(4), {sampling_map(make_uniform_grid(8), SchemeRule::ksss)}};
  CHECK_THROWS_WITH_AS(bias_center(sv, cfg), doctest::Contains("deterministic"),
                       std::invalid_argument);
}

TEST_CASE("noise robustness against realized variance" * doctest::timeout(120)) {
  // Additive observation noise with sd 0.002 inflates realized variance by
  // about 2 n sd^2 = 0.0164 at n = 2048 while the projection estimator stays
  // near the true value 0.04.
  const int n = 2048;
  const int m = choose_m(n, 1.0, 0.4);
  PathModel model = PathModel::constant(Matrix(1, 1, 0.2));
  NoiseSpec noise;
  noise.sd = 0.002;
  std::vector<TimeGrid> grids{make_uniform_grid(n)};
  const int reps = 100;
  double mean_siml = 0.0;
  double mean_rv = 0.0;
  for (int r = 0; r < reps; ++r) {
    FinePath path = simulate_fine(model, n, 100u + static_cast<std::uint64_t>(r));
    ObservationSet clean = observe(path, grids);
    ObservationSet noisy = add_noise(clean, noise, 77000u + static_cast<std::uint64_t>(r));
    mean_siml += siml_equispaced(noisy, KernelOrder(m))(0, 0);
    mean_rv += realized_covariance(noisy)(0, 0);
  }
  mean_siml /= reps;
  mean_rv /= reps;
  CHECK(std::fabs(mean_siml - 0.04) < 0.004);
  CHECK(mean_rv - 0.04 > 0.012);
}

}  // TEST_SUITE
