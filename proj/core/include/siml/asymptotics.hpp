#pragma once
// Limit-behaviour diagnostics for the sampled cosine kernel.
//
// Everything here measures, at finite (n, m), quantities whose limits drive
// the estimator's consistency and asymptotic variance:
//   * diagonal kernel integrals and their convergence rate in m,
//   * double integrals of products of two sampled kernels over the square
//     [0,1]^2 or the triangle {0 <= u <= s <= 1} (cell-exact in the kernel
//     factors, quadrature only in the scalar weight),
//   * the gamma tensor m * triangle integral for every ordered pair of asset
//     pairs,
//   * sup-type L^p bounds of the kernel profile,
//   * a term-wise decomposition of the normalized estimator on a simulated
//     path into its martingale and drift residue components.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "siml/estimator.hpp"
#include "siml/kernel.hpp"
#include "siml/sampling.hpp"
#include "siml/simulate.hpp"

namespace siml {

// Scalar weight g(s, u) on the plane; s is the outer (slow) coordinate.
class PlaneIntegrand {
 public:
  static PlaneIntegrand constant(double c);
  static PlaneIntegrand of(std::function<double(double, double)> f);

  bool is_constant() const { return is_constant_; }
  double constant_value() const { return constant_; }
  double operator()(double s, double u) const { return is_constant_ ? constant_ : f_(s, u); }

 private:
  PlaneIntegrand() = default;
  bool is_constant_ = false;
  double constant_ = 0.0;
  std::function<double(double, double)> f_;
};

enum class Region {
  lower_triangle,  // {(s, u) : 0 <= u <= s <= t}
  square           // [0, t]^2
};

// One measured statistic at a given (n, m).
struct ConvergenceRow {
  int n = 0;
  int m = 0;
  std::string statistic;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;         // |value - reference|
  double scaled_error = 0.0;  // rate-normalized error (see each producer)
};

struct ConvergenceTable {
  std::string regime;  // classification of rho_n * m_n along the row sequence
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> flags;  // violated monotonicity expectations
};

// gamma^{j,j',k,k'} = m * triangle integral of D^{j,j'} D^{k,k'}, for every
// combination of ordered asset pairs; symmetric under swapping the two pairs.
struct GammaTensor {
  int assets = 0;
  int m = 0;
  std::vector<int> counts;    // observation intervals per asset
  std::vector<double> values; // assets^4, index ((j*J + jp)*J + k)*J + kp

  double gamma(int j, int jp, int k, int kp) const;
  // Single-asset summary gamma(0,0,0,0).
  double scalar() const { return gamma(0, 0, 0, 0); }
};

// Term-wise decomposition of the normalized estimator (2/prefactor) * V for
// one asset pair (a, b) on a simulated path:
//   normalized = centering + M^{ab} + M^{ba} + I^{1,ab} + I^{1,ba}
//              + I^{2,ab} + I^{2,ba} + I^{3,ab} + I^{3,ba} + error,
// where, with K the two-argument kernel through the sampling maps,
//   M^{ab}   = (2/m) sum_l int (int_0^{s-} K dM^a) K dM^b   (martingale x martingale)
//   I^{1,ab} = (2/m) sum_l int (int_0^{s-} K dM^a) K b^b ds (martingale inner, drift outer)
//   I^{2,ab} = (2/m) sum_l int (int_0^{s-} K b^a du) K dM^b (drift inner, martingale outer)
//   I^{3,ab} = drift x drift with the shared diagonal split evenly,
// all discretized with left-point sums on the fine simulation mesh using the
// recorded coefficient paths.  The centering is the Riemann sum of
// K(phi_a(s), phi_b(s)) Sigma^{ab}(s) over the same mesh; the reconstruction
// error is the remaining gap (realized-vs-expected quadratic covariation
// fluctuation plus the diagonal drift-martingale cross terms).
struct ResidueBreakdown {
  double v = 0.0;           // raw estimate for the pair
  double normalized = 0.0;  // (2 / prefactor) * v
  double centering = 0.0;
  double m_ab = 0.0, m_ba = 0.0;
  double i1_ab = 0.0, i1_ba = 0.0;
  double i2_ab = 0.0, i2_ba = 0.0;
  double i3_ab = 0.0, i3_ba = 0.0;
  double residue_sum = 0.0;          // sum of the eight terms above
  double reconstruction_error = 0.0; // |normalized - centering - residue_sum|
  int fine_steps = 0;
};

struct BoundCheckResult {
  bool pass = true;
  double worst_ratio = 0.0;  // max over samples of |D_m(x)| / bound(x)
  int worst_m = 0;
  double worst_x = 0.0;
};

// Step-function approximation of the identity map: midpoint representatives
// on the uniform n-grid.
SamplingMap identity_map(int n);

// Tabulates |diagonal_integral(m, phi, phi, g) - int g| on uniform grids for
// each n, with m = m_rule(n); scaled_error is sqrt(m) * error.  Rows are
// sorted by n.  The regime tag classifies the trend of rho_n * m_n = m/n.
ConvergenceTable diagonal_convergence_study(SchemeRule scheme, const ScalarIntegrand& g,
                                            std::vector<int> n_list,
                                            const std::function<int(int)>& m_rule);

// Diagonal integral with left-endpoint representatives on one asset and
// right-endpoint on the other at m = 2n; identically zero for every n.
double counterexample_integral(int n);

// Integral over the region of K(phi_j(s), phi_jp(u)) * K(phi_k(s), phi_kp(u))
// * g(s, u), truncated at outer bound t in (0, 1].  The kernel product is
// constant on each cell of refinement(j,k) x refinement(jp,kp) and is
// integrated cell-exactly; g uses midpoint quadrature per cell (exact for
// constant and bilinear weights away from clipped cells).
double squared_kernel_integral(KernelOrder m, const SamplingMap& phi_j,
                               const SamplingMap& phi_jp, const SamplingMap& phi_k,
                               const SamplingMap& phi_kp, const PlaneIntegrand& g,
                               Region region, double t = 1.0);

// m * max over the representatives s of map_s of int_0^1 |K(phi_u(.), s)|^p,
// cell-exact in the integration variable.  Requires p > 1.
double lp_sup_integral(KernelOrder m, double p, const SamplingMap& map_u,
                       const SamplingMap& map_s);

// Diagonal squared-kernel profile 1 + D_m(2s); its maximum over s bounds
// m * int K(u, s)^2 du for identity-like maps, and never exceeds 2.
double l2_profile(double s, KernelOrder m);

// Checks |D_m(x)| <= min(1, 1/(2 m x)) at sample_count low-discrepancy points
// x in (0, 1] for every m in m_list.
BoundCheckResult pointwise_bound_check(const std::vector<int>& m_list, int sample_count);

// Gamma tensor over all ordered pair combinations of the given per-asset
// maps, with optional plane weight.
GammaTensor gamma_estimate(KernelOrder m, const std::vector<SamplingMap>& maps,
                           const PlaneIntegrand& g = PlaneIntegrand::constant(1.0));

// Decomposes the estimate for the asset pair (0, min(1, assets-1)) of the
// given path.  cfg must hold one map per path asset, each grid lying exactly
// on the fine mesh; the path must carry recorded coefficient evaluations.
ResidueBreakdown residue_breakdown(const FinePath& path, const PathModel& model,
                                   const SimlConfig& cfg);

// Monte Carlo scaling of the drift residues sqrt(m) * E|I^{1,ab} + I^{3,ab}|
// (expected to decrease along n_list) and of the martingale term m * E[(M^{ab})^2]
// (reported against a small-m heuristic reference, not asserted).  Uses
// uniform grids with (2k-1)/(2n+1) representatives and fine step count 2n.
ConvergenceTable residue_scaling_study(const PathModel& model, std::vector<int> n_list,
                                       const std::function<int(int)>& m_rule, int seeds,
                                       std::uint64_t base_seed = 2026);

}  // namespace siml
