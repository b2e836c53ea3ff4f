#include "siml/checks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "siml/asymptotics.hpp"
#include "siml/kernel.hpp"
#include "siml/rng.hpp"
#include "siml/sampling.hpp"

namespace siml {
namespace {

CheckResult make_result(std::string name, double worst, double tol, std::string detail) {
  CheckResult res;
  res.name = std::move(name);
  res.worst = worst;
  res.tolerance = tol;
  res.pass = worst <= tol;
  res.detail = std::move(detail);
  return res;
}

CheckResult closed_form_identity(const CheckOptions& opt) {
  Rng rng(opt.seed, 1);
  double worst = 0.0;
  for (int i = 0; i < opt.identity_samples; ++i) {
    const double u = 4.0 * rng.uniform() - 2.0;
    const double s = 4.0 * rng.uniform() - 2.0;
    const KernelOrder m(1 + static_cast<int>(rng.uniform() * opt.max_m));
    worst = std::max(worst,
                     std::fabs(kernel_direct_sum(u, s, m) - kernel_closed_form(u, s, m)));
  }
  return make_result("closed-form-matches-cosine-sum", worst, 1e-10,
                     std::to_string(opt.identity_samples) +
                         " random points on [-2,2]^2, orders 1.." +
                         std::to_string(opt.max_m));
}

CheckResult cosine_orthonormality(const CheckOptions& opt) {
  double worst = 0.0;
  for (int l = 1; l <= opt.orthogonality_max_l; ++l)
    for (int lp = 1; lp <= opt.orthogonality_max_l; ++lp) {
      const double want = l == lp ? 0.5 : 0.0;
      worst = std::max(worst, std::fabs(cos_product_integral(l, lp) - want));
    }
  return make_result("cosine-weights-orthonormal", worst, 1e-12,
                     "frequency pairs up to " + std::to_string(opt.orthogonality_max_l));
}

CheckResult cross_diagonal_cancellation(const CheckOptions& opt) {
  double worst = 0.0;
  for (int n = 2; n <= opt.cross_max_n; ++n)
    worst = std::max(worst, std::fabs(counterexample_integral(n)));
  return make_result("left-right-cross-diagonal-vanishes", worst, 1e-12,
                     "interval counts 2.." + std::to_string(opt.cross_max_n));
}

CheckResult left_diagonal_value(const CheckOptions& opt) {
  double worst = 0.0;
  for (int n = 4; n <= opt.diagonal_max_n; ++n) {
    const SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::left);
    const double got =
        diagonal_integral(KernelOrder(2 * n), map, map, ScalarIntegrand::constant(1.0));
    worst = std::max(worst, std::fabs(got - (1.0 + 1.0 / n)));
  }
  return make_result("left-map-diagonal-value", worst, 1e-12,
                     "interval counts 4.." + std::to_string(opt.diagonal_max_n) +
                         ", order twice the count");
}

CheckResult kronecker_sampling(const CheckOptions& opt) {
  double worst = 0.0;
  for (int n = 2; n <= opt.kronecker_max_n; ++n) {
    const KernelOrder m(2 * n + 1);
    const SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::ksss);
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp < n; ++kp) {
        const double u = (k + 0.3) / n;
        const double s = (kp + 0.6) / n;
        const double want = k == kp ? 1.0 : 0.0;
        worst = std::max(worst, std::fabs(kernel_sampled(u, s, m, map, map) - want));
      }
  }
  return make_result("interval-mass-kronecker", worst, 1e-10,
                     "interval counts 2.." + std::to_string(opt.kronecker_max_n) +
                         ", order 2n+1, all interval pairs");
}

CheckResult triangle_mass_value(const CheckOptions& opt) {
  double worst = 0.0;
  for (int n = 2; n <= opt.kronecker_max_n; ++n) {
    const SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::ksss);
    const double got = squared_kernel_integral(KernelOrder(2 * n + 1), map, map, map, map,
                                               PlaneIntegrand::constant(1.0),
                                               Region::lower_triangle);
    worst = std::max(worst, std::fabs(got - 0.5 / n));
  }
  return make_result("triangle-mass-value", worst, 1e-12,
                     "interval counts 2.." + std::to_string(opt.kronecker_max_n) +
                         ", order 2n+1");
}

CheckResult diagonal_profile_bound(const CheckOptions& opt) {
  double worst = -2.0;
  for (int m = 1; m <= opt.max_m; ++m) {
    const KernelOrder order(m);
    const int samples = 4 * m + 1;
    for (int i = 0; i <= samples; ++i) {
      const double s = static_cast<double>(i) / samples;
      worst = std::max(worst, l2_profile(s, order) - 2.0);
    }
  }
  return make_result("diagonal-profile-bounded", worst, 1e-9,
                     "orders 1.." + std::to_string(opt.max_m) +
                         ", at least four points per oscillation");
}

CheckResult pointwise_envelope(const CheckOptions& opt) {
  std::vector<int> orders;
  for (int m = 1; m <= opt.max_m; ++m) orders.push_back(m);
  const BoundCheckResult res = pointwise_bound_check(orders, opt.bound_samples);
  return make_result("pointwise-envelope-holds", res.worst_ratio - 1.0, 1e-12,
                     std::to_string(opt.bound_samples) + " points per order, orders 1.." +
                         std::to_string(opt.max_m));
}

CheckResult gamma_orthogonal_value(const CheckOptions&) {
  double worst = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const std::vector<SamplingMap> maps{
        sampling_map(make_uniform_grid(n), SchemeRule::ksss)};
    const GammaTensor g = gamma_estimate(KernelOrder(2 * n + 1), maps);
    worst = std::max(worst, std::fabs(g.scalar() - (2.0 * n + 1.0) / (2.0 * n)));
  }
  return make_result("gamma-orthogonal-value", worst, 1e-12,
                     "interval counts {4, 8, 16, 32}, order 2n+1");
}

}  // namespace

std::vector<CheckResult> run_kernel_checks(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(closed_form_identity(opt));
  out.push_back(cosine_orthonormality(opt));
  out.push_back(cross_diagonal_cancellation(opt));
  out.push_back(left_diagonal_value(opt));
  out.push_back(kronecker_sampling(opt));
  out.push_back(triangle_mass_value(opt));
  out.push_back(diagonal_profile_bound(opt));
  out.push_back(pointwise_envelope(opt));
  out.push_back(gamma_orthogonal_value(opt));
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace siml
