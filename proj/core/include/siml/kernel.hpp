#pragma once
// Dirichlet-type cosine projection kernel.
//
// The scalar kernel of order m is
//     D_m(x) = sin(m pi x) / (2 m sin(pi x / 2)),
// extended to a total function by filling the removable singularities at
// even integers with their limits (D_m(0) = 1, D_m(x + 2) = -D_m(x), even).
// It is the closed form of the cosine average
//     D_m(x) = (1/m) sum_{l=1..m} cos((l - 1/2) pi x),
// and the two-argument kernel built from the first m half-integer cosines
// satisfies
//     (2/m) sum_{l=1..m} cos((l-1/2) pi u) cos((l-1/2) pi s)
//         = D_m(u + s) + D_m(u - s).

#include <functional>
#include <stdexcept>

#include "siml/sampling.hpp"

namespace siml {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Projection order m >= 1 (number of cosine frequencies retained).
class KernelOrder {
 public:
  explicit KernelOrder(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("KernelOrder: m must be >= 1");
  }
  int value() const { return m_; }

 private:
  int m_;
};

// Orthonormal discrete cosine weight
//   p(n,k,l) = sqrt(2/(n+1/2)) * cos((l-1/2) pi (k-1/2) / (n+1/2)),
// rows/columns indexed 1..n.  The n x n matrix [p(n,k,l)] is orthogonal.
double cos_basis_weight(int n, int k, int l);

// Total Dirichlet-type function described above; |D_m| <= 1 everywhere and
// |D_m(x)| <= 1/(2 m |x|) on (0, 1].
double dirichlet_half(double x, KernelOrder m);

// Two-argument kernel, direct O(m) cosine sum.
double kernel_direct_sum(double u, double s, KernelOrder m);

// Two-argument kernel via the closed form D_m(u+s) + D_m(u-s).
double kernel_closed_form(double u, double s, KernelOrder m);

// Kernel evaluated through a pair of sampling maps:
//   D^{a,b}_m(u, s) = kernel(phi_a(u), phi_b(s)).
// u and s must lie in [0,1].
double kernel_sampled(double u, double s, KernelOrder m,
                      const SamplingMap& map_a, const SamplingMap& map_b);

// Exact value of \int_0^1 cos((l-1/2) pi s) cos((lp-1/2) pi s) ds evaluated
// from the antiderivative (equals 1/2 when l == lp, else ~0).
double cos_product_integral(int l, int lp);

// Scalar weight function with an optional exact antiderivative.  Interval
// integrals use the antiderivative when available and 5-point Gauss-Legendre
// quadrature otherwise (exact for polynomial degree <= 9).
class ScalarIntegrand {
 public:
  static ScalarIntegrand constant(double c);
  static ScalarIntegrand of(std::function<double(double)> f);
  static ScalarIntegrand with_antiderivative(std::function<double(double)> f,
                                             std::function<double(double)> antiderivative);

  double operator()(double s) const { return f_(s); }
  double integral(double lo, double hi) const;

 private:
  ScalarIntegrand() = default;
  std::function<double(double)> f_;
  std::function<double(double)> antiderivative_;  // empty -> quadrature
};

// \int_0^1 kernel(phi_a(s), phi_b(s)) g(s) ds, computed cell-exactly on the
// common refinement of the two grids (the sampled kernel is constant on each
// refinement cell).
double diagonal_integral(KernelOrder m, const SamplingMap& map_a,
                         const SamplingMap& map_b, const ScalarIntegrand& g);

}  // namespace siml
