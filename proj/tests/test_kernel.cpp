#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "siml/kernel.hpp"
#include "siml/rng.hpp"

using namespace siml;

namespace {
// Deterministic low-discrepancy points in (0,1]: Weyl sequence on the golden
// ratio.
double weyl_point(long i) {
  double x = std::fmod((static_cast<double>(i) + 1.0) * 0.6180339887498949, 1.0);
  return x == 0.0 ? 1.0 : x;
}
}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("cosine basis weights match high-precision reference values") {
  CHECK(cos_basis_weight(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cos_basis_weight(2, 1, 1) ==
        doctest::Approx(0.850650808352039932).epsilon(1e-14));
  CHECK(cos_basis_weight(2, 2, 2) ==
        doctest::Approx(-0.850650808352039932).epsilon(1e-14));
  CHECK(cos_basis_weight(2, 1, 2) ==
        doctest::Approx(0.525731112119133606).epsilon(1e-14));
  CHECK(cos_basis_weight(2, 2, 1) ==
        doctest::Approx(0.525731112119133606).epsilon(1e-14));
}

TEST_CASE("cosine basis weight matrix is orthogonal") {
  for (int n : {2, 5, 17}) {
    for (int l = 1; l <= n; ++l) {
      for (int lp = l; lp <= n; ++lp) {
        double dot = 0.0;
        for (int k = 1; k <= n; ++k)
          dot += cos_basis_weight(n, k, l) * cos_basis_weight(n, k, lp);
        CHECK(std::fabs(dot - (l == lp ? 1.0 : 0.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("cosine basis weight rejects out-of-range indices") {
  CHECK_THROWS_AS(cos_basis_weight(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(cos_basis_weight(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(cos_basis_weight(4, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(cos_basis_weight(4, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(KernelOrder(0), std::invalid_argument);
}

TEST_CASE("dirichlet function hits exact anchor values") {
  // Removable singularities filled by limits.
  CHECK(dirichlet_half(0.0, KernelOrder(1)) == 1.0);
  CHECK(dirichlet_half(0.0, KernelOrder(37)) == 1.0);
  CHECK(dirichlet_half(2.0, KernelOrder(5)) == -1.0);
  CHECK(dirichlet_half(-2.0, KernelOrder(8)) == -1.0);
  CHECK(dirichlet_half(4.0, KernelOrder(3)) == 1.0);
  // Zero at x = 1 for every order.
  for (int m : {1, 2, 3, 8, 101, 512})
    CHECK(dirichlet_half(1.0, KernelOrder(m)) == 0.0);
}

TEST_CASE("dirichlet function matches high-precision reference values") {
  CHECK(dirichlet_half(0.5, KernelOrder(1)) ==
        doctest::Approx(0.707106781186547524).epsilon(1e-14));
  CHECK(dirichlet_half(0.3, KernelOrder(3)) ==
        doctest::Approx(0.113444736014017069).epsilon(1e-13));
  CHECK(dirichlet_half(0.123, KernelOrder(7)) ==
        doctest::Approx(0.157335072486033981).epsilon(1e-13));
  CHECK(dirichlet_half(1.0 / 3.0, KernelOrder(4)) ==
        doctest::Approx(-0.216506350946109662).epsilon(1e-13));
  CHECK(dirichlet_half(0.74, KernelOrder(6)) ==
        doctest::Approx(0.0891929810030116418).epsilon(1e-13));
}

TEST_CASE("dirichlet function is even, 2-antiperiodic, and total") {
  Rng rng(20240811);
  for (int i = 0; i < 2000; ++i) {
    double x = 8.0 * rng.uniform() - 4.0;
    int m = 1 + static_cast<int>(rng.uniform() * 512);
    KernelOrder order(m);
    double v = dirichlet_half(x, order);
    CHECK(std::isfinite(v));
    CHECK(std::fabs(v) <= 1.0 + 1e-12);
    CHECK(dirichlet_half(-x, order) == v);  // even, exactly
    CHECK(std::fabs(dirichlet_half(x + 2.0, order) + v) < 1e-12);
    CHECK(std::fabs(dirichlet_half(x - 2.0, order) + v) < 1e-12);
  }
  // Large arguments reduce without loss.
  CHECK(std::fabs(dirichlet_half(1001.0, KernelOrder(64))) < 1e-12);
  CHECK(dirichlet_half(1002.0, KernelOrder(64)) == -1.0);
}

TEST_CASE("closed form near removable singularities agrees with the cosine sum") {
  for (int m : {1, 2, 7, 64, 511}) {
    KernelOrder order(m);
    for (double eps : {1e-7, 1e-9, 1e-11, 1e-13}) {
      for (double base : {0.0, 2.0, -2.0}) {
        double x = base + eps;
        double direct = 0.0;
        for (int l = 1; l <= m; ++l) direct += std::cos((l - 0.5) * kPi * x);
        direct /= m;
        CHECK(std::fabs(dirichlet_half(x, order) - direct) < 1e-10);
      }
    }
  }
}

TEST_CASE("pointwise decay bound holds on the unit interval") {
  for (int m : {1, 2, 3, 5, 16, 64, 256}) {
    KernelOrder order(m);
    for (long i = 0; i < 20000; ++i) {
      double x = weyl_point(i);
      double bound = std::min(1.0, 1.0 / (2.0 * m * x));
      REQUIRE(std::fabs(dirichlet_half(x, order)) <= bound);
    }
  }
}

TEST_CASE("direct cosine sum and closed form agree everywhere") {
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = 4.0 * rng.uniform() - 2.0;
    double s = 4.0 * rng.uniform() - 2.0;
    int m = 1 + static_cast<int>(rng.uniform() * 512);
    double d = std::fabs(kernel_direct_sum(u, s, KernelOrder(m)) -
                         kernel_closed_form(u, s, KernelOrder(m)));
    worst = std::max(worst, d);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("two-argument kernel reference values") {
  CHECK(std::fabs(kernel_closed_form(0.3, 0.7, KernelOrder(5))) < 1e-14);
  CHECK(kernel_closed_form(0.2, 0.45, KernelOrder(8)) ==
        doctest::Approx(-0.0430856764718665865).epsilon(1e-12));
  CHECK(kernel_closed_form(1.0, 1.0, KernelOrder(3)) == 0.0);
  CHECK(kernel_closed_form(0.0, 0.0, KernelOrder(9)) == 2.0);
}

TEST_CASE("two-argument kernel is symmetric and bounded by two") {
  Rng rng(123);
  for (int i = 0; i < 3000; ++i) {
    double u = 4.0 * rng.uniform() - 2.0;
    double s = 4.0 * rng.uniform() - 2.0;
    KernelOrder m(1 + static_cast<int>(rng.uniform() * 128));
    double a = kernel_closed_form(u, s, m);
    CHECK(kernel_closed_form(s, u, m) == a);  // exact symmetry
    CHECK(std::fabs(a) <= 2.0 + 1e-12);
  }
}

TEST_CASE("kernel diagonal equals one plus the doubled-argument function") {
  Rng rng(45);
  for (int i = 0; i < 2000; ++i) {
    double s = rng.uniform();
    KernelOrder m(1 + static_cast<int>(rng.uniform() * 256));
    CHECK(std::fabs(kernel_closed_form(s, s, m) - 1.0 - dirichlet_half(2.0 * s, m)) <
          1e-14);
  }
}

TEST_CASE("half-integer cosines are orthogonal under the exact antiderivative") {
  for (int l = 1; l <= 64; ++l)
    for (int lp = 1; lp <= 64; ++lp) {
      double v = cos_product_integral(l, lp);
      CHECK(std::fabs(v - (l == lp ? 0.5 : 0.0)) < 1e-12);
    }
}

TEST_CASE("kernel carries unit L2 mass on the unit square") {
  // m * int int kernel^2 du ds expands through the cosine factorisation into
  // (4/m) sum_{l,lp} (int cos_l cos_lp)^2 = 1.
  for (int m : {1, 2, 3, 8, 32, 128}) {
    double acc = 0.0;
    for (int l = 1; l <= m; ++l)
      for (int lp = 1; lp <= m; ++lp) {
        double v = cos_product_integral(l, lp);
        acc += v * v;
      }
    CHECK(std::fabs(4.0 * acc / m - 1.0) < 1e-10);
  }
}

TEST_CASE("sampled kernel rejects arguments outside the unit interval") {
  SamplingMap map = sampling_map(make_uniform_grid(4), SchemeRule::left);
  CHECK_THROWS_AS(kernel_sampled(-0.1, 0.5, KernelOrder(2), map, map),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_sampled(0.1, 1.5, KernelOrder(2), map, map),
                  std::invalid_argument);
}

TEST_CASE("sampled kernel with the ksss rule is a Kronecker delta") {
  int n = 5;
  KernelOrder m(2 * n + 1);
  SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::ksss);
  for (int k = 0; k < n; ++k)
    for (int kp = 0; kp < n; ++kp) {
      double u = (k + 0.3) / n;
      double s = (kp + 0.6) / n;
      double v = kernel_sampled(u, s, m, map, map);
      CHECK(std::fabs(v - (k == kp ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("sampled kernel through a fine left map at the origin") {
  SamplingMap map = sampling_map(make_uniform_grid(1024), SchemeRule::left);
  CHECK(kernel_sampled(0.0, 0.0, KernelOrder(16), map, map) == 2.0);
}

TEST_CASE("quadrature rule integrates polynomials of degree nine exactly") {
  ScalarIntegrand g = ScalarIntegrand::of([](double s) { return std::pow(s, 9.0); });
  CHECK(g.integral(0.0, 1.0) == doctest::Approx(0.1).epsilon(1e-14));
  ScalarIntegrand c = ScalarIntegrand::constant(3.5);
  CHECK(c.integral(0.25, 0.75) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("diagonal integral with left maps and doubled order is one plus one over n") {
  for (int n : {4, 7, 64, 101, 256}) {
    SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::left);
    double v = diagonal_integral(KernelOrder(2 * n), map, map, ScalarIntegrand::constant(1.0));
    CHECK(std::fabs(v - (1.0 + 1.0 / n)) < 1e-12);
  }
}

TEST_CASE("diagonal integral with mixed left and right maps vanishes") {
  for (int n : {2, 3, 16, 41, 64}) {
    TimeGrid grid = make_uniform_grid(n);
    SamplingMap left = sampling_map(grid, SchemeRule::left);
    SamplingMap right = sampling_map(grid, SchemeRule::right);
    double v = diagonal_integral(KernelOrder(2 * n), left, right, ScalarIntegrand::constant(1.0));
    CHECK(std::fabs(v) < 1e-12);
  }
}

TEST_CASE("diagonal integral with the ksss rule is one plus one over two n") {
  // Follows from the orthogonality of the cosine basis weights whenever the
  // order does not exceed the interval count.
  struct Case { int n; int m; };
  for (Case c : {Case{64, 11}, Case{256, 36}, Case{16, 16}}) {
    SamplingMap map = sampling_map(make_uniform_grid(c.n), SchemeRule::ksss);
    double v = diagonal_integral(KernelOrder(c.m), map, map, ScalarIntegrand::constant(1.0));
    CHECK(std::fabs(v - (1.0 + 0.5 / c.n)) < 1e-12);
  }
}

TEST_CASE("diagonal integral weighted by a polynomial, hand-computed case") {
  // n = 3, m = 2, left map, g(s) = s^2: cell kernel values are 2, 3/4, 5/4
  // and the g-masses are 1/81, 7/81, 19/81, so the integral is 31/81.
  SamplingMap map = sampling_map(make_uniform_grid(3), SchemeRule::left);
  ScalarIntegrand g = ScalarIntegrand::with_antiderivative(
      [](double s) { return s * s; }, [](double s) { return s * s * s / 3.0; });
  CHECK(diagonal_integral(KernelOrder(2), map, map, g) ==
        doctest::Approx(31.0 / 81.0).epsilon(1e-14));
  // The quadrature path gives the same value without the antiderivative.
  ScalarIntegrand gq = ScalarIntegrand::of([](double s) { return s * s; });
  CHECK(diagonal_integral(KernelOrder(2), map, map, gq) ==
        doctest::Approx(31.0 / 81.0).epsilon(1e-14));
}

TEST_CASE("diagonal integral walks the refinement of distinct grids") {
  // Asynchronous pair: value must match a brute-force evaluation on a fine
  // mesh of midpoints.
  TimeGrid ga({0.0, 0.3, 0.55, 1.0});
  TimeGrid gb({0.0, 0.2, 0.9, 1.0});
  SamplingMap ma = sampling_map(ga, SchemeRule::midpoint);
  SamplingMap mb = sampling_map(gb, SchemeRule::midpoint);
  KernelOrder m(4);
  double v = diagonal_integral(m, ma, mb, ScalarIntegrand::constant(1.0));
  double brute = 0.0;
  int fine = 200000;
  for (int i = 0; i < fine; ++i) {
    double s = (i + 0.5) / fine;
    brute += kernel_closed_form(ma(s), mb(s), m) / fine;
  }
  CHECK(v == doctest::Approx(brute).epsilon(1e-8));
}

}  // TEST_SUITE
