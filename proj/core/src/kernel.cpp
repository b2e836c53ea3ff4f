#include "siml/kernel.hpp"

#include <cmath>

namespace siml {
namespace {

// Threshold on |sin(pi x / 2)| below which the closed form is replaced by the
// exact finite cosine sum; keeps the function total at the removable
// singularities x in 2Z.
constexpr double kSingularTol = 1e-8;

// sin(pi w) for w in [-1, 1] with exact zeros at -1, 0, 1 and the argument
// reflected into [0, 1/2] so the result stays accurate near the zeros.
double sin_pi(double w) {
  double a = std::fabs(w);
  if (a == 0.0 || a == 1.0) return 0.0;
  double v = (a > 0.5) ? std::sin(kPi * (1.0 - a)) : std::sin(kPi * a);
  return w < 0.0 ? -v : v;
}

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl5Node[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
constexpr double kGl5Weight[5] = {0.23692688505618909, 0.47862867049936647,
                                  0.5688888888888889, 0.47862867049936647,
                                  0.23692688505618909};

}  // namespace

double cos_basis_weight(int n, int k, int l) {
  if (n < 1) throw std::invalid_argument("cos_basis_weight: n must be >= 1");
  if (k < 1 || k > n || l < 1 || l > n)
    throw std::invalid_argument("cos_basis_weight: indices must lie in 1..n");
  double np = n + 0.5;
  return std::sqrt(2.0 / np) * std::cos((l - 0.5) * kPi * (k - 0.5) / np);
}

double dirichlet_half(double x, KernelOrder m) {
  // D_m has period 4, is even, and satisfies D_m(2 - y) = -D_m(y); reduce to
  // xr in [0, 1] so both sin arguments below stay well conditioned.  The
  // subtraction 2 - xr is exact for xr in [1, 2].
  double xr = std::fabs(std::remainder(x, 4.0));
  double sign = 1.0;
  if (xr > 1.0) {
    xr = 2.0 - xr;
    sign = -1.0;
  }
  int mi = m.value();
  double denom = sin_pi(0.5 * xr);
  if (std::fabs(denom) < kSingularTol) {
    // Near x in 2Z: evaluate the equivalent finite cosine average instead of
    // the 0/0 ratio.
    double acc = 0.0;
    for (int l = 1; l <= mi; ++l) acc += std::cos((l - 0.5) * kPi * xr);
    return sign * acc / mi;
  }
  // sin(m pi xr) with the even part of m*xr removed exactly before the call.
  double w = std::remainder(static_cast<double>(mi) * xr, 2.0);
  return sign * sin_pi(w) / (2.0 * mi * denom);
}

double kernel_direct_sum(double u, double s, KernelOrder m) {
  int mi = m.value();
  double acc = 0.0;
  for (int l = 1; l <= mi; ++l) {
    double a = (l - 0.5) * kPi;
    acc += std::cos(a * u) * std::cos(a * s);
  }
  return 2.0 * acc / mi;
}

double kernel_closed_form(double u, double s, KernelOrder m) {
  return dirichlet_half(u + s, m) + dirichlet_half(u - s, m);
}

double kernel_sampled(double u, double s, KernelOrder m, const SamplingMap& map_a,
                      const SamplingMap& map_b) {
  if (u < 0.0 || u > 1.0 || s < 0.0 || s > 1.0)
    throw std::invalid_argument("kernel_sampled: arguments must lie in [0,1]");
  return kernel_closed_form(map_a(u), map_b(s), m);
}

double cos_product_integral(int l, int lp) {
  if (l < 1 || lp < 1)
    throw std::invalid_argument("cos_product_integral: frequencies must be >= 1");
  // cos a cos b = (cos(a+b) + cos(a-b)) / 2 with a+b = (l+lp-1) pi s and
  // a-b = (l-lp) pi s; antiderivatives evaluated at 1 and 0.
  int sum = l + lp - 1;
  double first = std::sin(sum * kPi) / (sum * kPi);
  double second = (l == lp) ? 1.0 : std::sin((l - lp) * kPi) / ((l - lp) * kPi);
  return 0.5 * (first + second);
}

ScalarIntegrand ScalarIntegrand::constant(double c) {
  ScalarIntegrand g;
  g.f_ = [c](double) { return c; };
  g.antiderivative_ = [c](double s) { return c * s; };
  return g;
}

ScalarIntegrand ScalarIntegrand::of(std::function<double(double)> f) {
  ScalarIntegrand g;
  g.f_ = std::move(f);
  return g;
}

ScalarIntegrand ScalarIntegrand::with_antiderivative(
    std::function<double(double)> f, std::function<double(double)> antiderivative) {
  ScalarIntegrand g;
  g.f_ = std::move(f);
  g.antiderivative_ = std::move(antiderivative);
  return g;
}

double ScalarIntegrand::integral(double lo, double hi) const {
  if (antiderivative_) return antiderivative_(hi) - antiderivative_(lo);
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGl5Weight[i] * f_(mid + half * kGl5Node[i]);
  return acc * half;
}

double diagonal_integral(KernelOrder m, const SamplingMap& map_a,
                         const SamplingMap& map_b, const ScalarIntegrand& g) {
  const std::vector<double>& ta = map_a.grid().times();
  const std::vector<double>& tb = map_b.grid().times();
  if (ta.front() != tb.front() || ta.back() != tb.back())
    throw std::invalid_argument("diagonal_integral: maps must span the same interval");
  // Walk the common refinement; on each refinement cell both maps are
  // constant, so the kernel factor is exact and only g is integrated.
  std::size_t ia = 0, ib = 0;
  double left = ta.front();
  double acc = 0.0;
  while (ia + 1 < ta.size() && ib + 1 < tb.size()) {
    double right = std::min(ta[ia + 1], tb[ib + 1]);
    if (right > left)
      acc += kernel_closed_form(map_a.rep(static_cast<int>(ia)),
                                map_b.rep(static_cast<int>(ib)), m) *
             g.integral(left, right);
    if (ta[ia + 1] == right) ++ia;
    if (tb[ib + 1] == right) ++ib;
    left = right;
  }
  return acc;
}

}  // namespace siml
