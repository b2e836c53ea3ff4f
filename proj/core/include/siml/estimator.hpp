#pragma once
// Integrated covariance estimators.
//
// The cosine-projection estimator keeps the lowest m frequencies of the
// observed increments.  On a common uniform grid it uses the orthonormal
// discrete cosine weights; the general form accepts one sampling map per
// asset and evaluates raw cosines at the interval representatives:
//
//   w^j_l   = sum_k cos((l-1/2) pi rep^j_k) (Y^j_k - Y^j_{k-1})
//   V^{jj'} = prefactor(n_j, n_j') * (1/m) * sum_{l<=m} w^j_l w^{j'}_l
//
// with prefactor 2 sqrt(n_j n_j') / sqrt((n_j+1/2)(n_j'+1/2)), which reduces
// to 2n/(n+1/2) for equal counts and makes the general form coincide with
// the equispaced one on uniform grids sampled at (2k-1)/(2n+1).
//
// Reference estimators: realised covariance (synchronous grids only) and a
// complex Fourier-coefficient estimator over left endpoints.

#include <complex>
#include <cstdint>
#include <vector>

#include "siml/kernel.hpp"
#include "siml/matrix.hpp"
#include "siml/sampling.hpp"
#include "siml/simulate.hpp"

namespace siml {

enum class PrefactorConvention {
  finite_sample,  // 2 sqrt(n_j n_j') / sqrt((n_j+1/2)(n_j'+1/2))
  asymptotic      // plain 2
};

struct SimlConfig {
  KernelOrder m;
  std::vector<SamplingMap> maps;  // one per asset
  PrefactorConvention prefactor = PrefactorConvention::finite_sample;
};

struct EstimateReport {
  Matrix v;                 // assets x assets, symmetric
  std::vector<int> counts;  // observation intervals per asset
  int m = 0;
};

double prefactor_value(int n_j, int n_jp, PrefactorConvention convention);

// Truncation order floor(c * n^alpha), clamped to >= 1.
int choose_m(int n, double c, double alpha);

// Orthonormal-weight estimator; every grid must be uniform with m not
// exceeding the smallest interval count.  Non-uniform grids are refused with
// a pointer to siml_general.
Matrix siml_equispaced(const ObservationSet& obs, KernelOrder m);

// General asynchronous estimator; cfg must carry one admissible map per
// asset, built on exactly the observation grids.
EstimateReport siml_general(const ObservationSet& obs, const SimlConfig& cfg);

// Fourier-coefficient estimator
//   (1/m) sum_{l=1..m} (sum_k e^{+2 pi i (l+q) t^a_{k-1}} dY^a_k)
//                      (sum_k e^{-2 pi i l     t^b_{k-1}} dY^b_k).
std::complex<double> mmf_estimate(const ObservationSet& obs, KernelOrder m, int q,
                                  int asset_a = 0, int asset_b = 0);

// Sum of products of synchronous increments; refuses asynchronous inputs.
Matrix realized_covariance(const ObservationSet& obs);

// Finite-sample centring matrix: entry (j,j') is the diagonal kernel
// integral of the model's spot covariance through the configured maps,
//   \int_0^1 kernel(phi_j(s), phi_j'(s)) Sigma^{jj'}(s) ds.
// Requires deterministic volatility.
Matrix bias_center(const PathModel& model, const SimlConfig& cfg);

}  // namespace siml
