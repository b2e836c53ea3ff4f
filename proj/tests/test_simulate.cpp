#include <doctest.h>

#include <cmath>
#include <thread>

#include "siml/parallel.hpp"
#include "siml/simulate.hpp"

using namespace siml;

namespace {

PathModel scalar_bm(double sigma, double drift = 0.0) {
  Matrix s(1, 1);
  s(0, 0) = sigma;
  return PathModel::constant(s, {drift});
}

// Correlated pair with integrated covariance [[0.04, 0.02], [0.02, 0.04]].
PathModel correlated_pair() {
  Matrix s(2, 2);
  s(0, 0) = 0.2;
  s(0, 1) = 0.0;
  s(1, 0) = 0.1;
  s(1, 1) = 0.1 * std::sqrt(3.0);
  return PathModel::constant(s);
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("terminal value has the exact Brownian variance") {
  // X(1) = sigma W(1) in law for every step count (the Euler increments are
  // exact Gaussians for constant coefficients), so a modest mesh checks the
  // same distribution; 1e4 independent paths give a variance estimate with
  // standard error 0.04 * sqrt(2/(R-1)).
  const int reps = 10000;
  const int steps = 5000;
  PathModel model = scalar_bm(0.2);
  std::vector<double> terminal(reps);
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  parallel_for(reps, threads > 0 ? threads : 4, [&](long r) {
    FinePath p = simulate_fine(model, steps, 1000 + static_cast<std::uint64_t>(r));
    terminal[static_cast<std::size_t>(r)] = p.value(0, steps);
  });
  double mean = 0.0;
  for (double v : terminal) mean += v;
  mean /= reps;
  double var = 0.0;
  for (double v : terminal) var += (v - mean) * (v - mean);
  var /= (reps - 1);
  double se = 0.04 * std::sqrt(2.0 / (reps - 1));
  CHECK(std::fabs(var - 0.04) < 3.0 * se);
  CHECK(std::fabs(mean) < 3.0 * 0.2 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("recorded driver increments carry the mesh variance") {
  FinePath p = simulate_fine(correlated_pair(), 4096, 99);
  REQUIRE(p.dw.size() == 2 * 4096);
  double q0 = 0.0, q1 = 0.0, cross = 0.0;
  for (int i = 0; i < 4096; ++i) {
    double a = p.dw[2 * static_cast<std::size_t>(i)];
    double b = p.dw[2 * static_cast<std::size_t>(i) + 1];
    q0 += a * a;
    q1 += b * b;
    cross += a * b;
  }
  // Quadratic variation of each driver ~ 1 within 3 sd; drivers independent.
  double sd = std::sqrt(2.0 / 4096.0);
  CHECK(std::fabs(q0 - 1.0) < 3.0 * sd);
  CHECK(std::fabs(q1 - 1.0) < 3.0 * sd);
  CHECK(std::fabs(cross) < 3.0 / std::sqrt(4096.0));
}

TEST_CASE("drift-only paths integrate the drift exactly") {
  FinePath p = simulate_fine(scalar_bm(0.0, 1.0), 1000, 5);
  CHECK(std::fabs(p.value(0, 1000) - 1.0) < 1e-12);
  CHECK(std::fabs(p.value(0, 500) - 0.5) < 1e-12);
  for (double w : p.dw) CHECK(w == w);  // drawn but unused
}

TEST_CASE("identical seeds reproduce paths bit for bit") {
  FinePath a = simulate_fine(correlated_pair(), 512, 4242);
  FinePath b = simulate_fine(correlated_pair(), 512, 4242);
  FinePath c = simulate_fine(correlated_pair(), 512, 4243);
  CHECK(a.values == b.values);
  CHECK(a.dw == b.dw);
  CHECK(a.values != c.values);
}

TEST_CASE("observation copies endpoint and mesh-aligned values verbatim") {
  FinePath p = simulate_fine(scalar_bm(0.3), 640, 17);
  ObservationSet ends = observe(p, {TimeGrid({0.0, 1.0})});
  REQUIRE(ends.values[0].size() == 2);
  CHECK(ends.values[0][0] == p.value(0, 0));
  CHECK(ends.values[0][1] == p.value(0, 640));

  ObservationSet full = observe(p, {make_uniform_grid(64)});
  for (int k = 0; k <= 64; ++k)
    CHECK(full.values[0][static_cast<std::size_t>(k)] == p.value(0, 10 * k));
  CHECK(full.max_snap_distance == 0.0);
  CHECK(full.grids[0].is_uniform());
}

TEST_CASE("observation snaps offset times to the left mesh point") {
  FinePath p = simulate_fine(scalar_bm(0.2), 100, 3);
  ObservationSet obs = observe(p, {TimeGrid({0.0, 0.4449, 1.0})});
  CHECK(obs.grids[0].times()[1] == doctest::Approx(0.44).epsilon(1e-15));
  CHECK(obs.values[0][1] == p.value(0, 44));
  CHECK(obs.max_snap_distance <= 1.0 / 100 + 1e-12);
  CHECK(obs.max_snap_distance > 0.0);
}

TEST_CASE("observation refuses grids finer than the fine mesh") {
  FinePath p = simulate_fine(scalar_bm(0.2), 32, 3);
  CHECK_THROWS_WITH_AS(observe(p, {make_uniform_grid(64)}),
                       doctest::Contains("64 steps required"), std::invalid_argument);
}

TEST_CASE("noise is reproducible, per-asset independent, and respects sd zero") {
  FinePath p = simulate_fine(correlated_pair(), 256, 11);
  ObservationSet obs = observe(p, {make_uniform_grid(128), make_uniform_grid(64)});
  NoiseSpec off;
  CHECK(add_noise(obs, off, 9).values == obs.values);

  NoiseSpec on{0.01, NoiseSpec::Dist::gaussian};
  ObservationSet n1 = add_noise(obs, on, 9);
  ObservationSet n2 = add_noise(obs, on, 9);
  ObservationSet n3 = add_noise(obs, on, 10);
  CHECK(n1.values == n2.values);
  CHECK(n1.values != n3.values);
  // Every observation gets a draw, including both endpoints.
  CHECK(n1.values[0].front() != obs.values[0].front());
  CHECK(n1.values[0].back() != obs.values[0].back());
  CHECK(n1.values[1].front() != obs.values[1].front());

  NoiseSpec neg{-0.1, NoiseSpec::Dist::gaussian};
  CHECK_THROWS_AS(add_noise(obs, neg, 1), std::invalid_argument);

  NoiseSpec uni{0.005, NoiseSpec::Dist::uniform};
  ObservationSet u = add_noise(obs, uni, 21);
  double bound = 0.005 * std::sqrt(3.0) + 1e-15;
  for (std::size_t k = 0; k < u.values[0].size(); ++k)
    CHECK(std::fabs(u.values[0][k] - obs.values[0][k]) <= bound);
}

TEST_CASE("pure-noise realised variance matches twice n times the noise variance") {
  // sigma = 0 so observed increments are pure noise differences; the sum of
  // squared increments over n intervals has mean 2 n sd^2.
  const int n = 8192;
  const double sv = 0.001;
  const int reps = 200;
  PathModel flat = scalar_bm(0.0);
  TimeGrid grid = make_uniform_grid(n);
  std::vector<double> rv(reps);
  for (int r = 0; r < reps; ++r) {
    FinePath p = simulate_fine(flat, n, 500 + static_cast<std::uint64_t>(r));
    ObservationSet obs = observe(p, {grid});
    NoiseSpec spec{sv, NoiseSpec::Dist::gaussian};
    ObservationSet noisy = add_noise(obs, spec, 90000 + static_cast<std::uint64_t>(r));
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
      double d = noisy.values[0][static_cast<std::size_t>(k)] -
                 noisy.values[0][static_cast<std::size_t>(k) - 1];
      acc += d * d;
    }
    rv[static_cast<std::size_t>(r)] = acc;
  }
  double mean = 0.0;
  for (double v : rv) mean += v;
  mean /= reps;
  double var = 0.0;
  for (double v : rv) var += (v - mean) * (v - mean);
  var /= (reps - 1);
  double se = std::sqrt(var / reps);
  CHECK(std::fabs(mean - 2.0 * n * sv * sv) < 3.0 * se);
}

TEST_CASE("exact integrated covariance for deterministic models") {
  Matrix c1 = integrated_covariance_true(scalar_bm(0.2));
  CHECK(c1(0, 0) == doctest::Approx(0.04).epsilon(1e-14));

  Matrix c2 = integrated_covariance_true(correlated_pair());
  CHECK(c2(0, 0) == doctest::Approx(0.04).epsilon(1e-13));
  CHECK(c2(0, 1) == doctest::Approx(0.02).epsilon(1e-13));
  CHECK(c2(1, 0) == doctest::Approx(0.02).epsilon(1e-13));
  CHECK(c2(1, 1) == doctest::Approx(0.04).epsilon(1e-13));

  // sigma(t) = 0.2 + 0.1 t integrates to 0.04 + 0.02 + 0.01/3.
  PathModel tv = PathModel::time_varying(1, 1, [](double t, std::span<double> out) {
    out[0] = 0.2 + 0.1 * t;
  });
  Matrix c3 = integrated_covariance_true(tv);
  CHECK(c3(0, 0) == doctest::Approx(0.04 + 0.02 + 0.01 / 3.0).epsilon(1e-12));
}

TEST_CASE("stochastic volatility must use the realised-path truth") {
  Matrix s(1, 1);
  s(0, 0) = 0.2;
  PathModel model = PathModel::ou_volatility(s, OuVolFactor{});
  CHECK_THROWS_AS(integrated_covariance_true(model), std::invalid_argument);

  FinePath p = simulate_fine(model, 2048, 7);
  REQUIRE(p.factor.size() == 2049);
  // Recorded sigma agrees with the base matrix scaled by exp(F) at the left
  // endpoint of each step.
  for (int i : {0, 100, 2047})
    CHECK(p.sigma[static_cast<std::size_t>(i)] ==
          doctest::Approx(0.2 * std::exp(p.factor[static_cast<std::size_t>(i)])).epsilon(1e-13));
  Matrix truth = path_integrated_covariance(p);
  CHECK(truth(0, 0) > 0.0);
  Matrix again = path_integrated_covariance(simulate_fine(model, 2048, 7));
  CHECK(truth(0, 0) == again(0, 0));
}

TEST_CASE("realised covariance of a constant model matches the exact truth") {
  FinePath p = simulate_fine(correlated_pair(), 1024, 13);
  Matrix realised = path_integrated_covariance(p);
  Matrix truth = integrated_covariance_true(correlated_pair());
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      CHECK(realised(j, k) == doctest::Approx(truth(j, k)).epsilon(1e-12));
}

}  // TEST_SUITE
