#pragma once

#include "deconv/common.hpp"
#include "deconv/rng.hpp"

#include <functional>
#include <span>
#include <vector>

namespace deconv {

using PairFn = std::function<double(double, double)>;
using DrawFn = std::function<double(RngStream&)>;

/// Martingale decomposition of U_n = sum_{i<j} H(Y_i, Y_j):
/// Z_i = (1/v_n) sum_{j<i} H(Y_i, Y_j), so v_n * sum Z_i reproduces U_n.
/// V_n^2 collects the conditional variances E(Z_i^2 | F_{i-1}), estimated by
/// inner Monte Carlo over fresh draws of Y_i; L_n adds the 2+2delta moments
/// and |V_n^2 - 1|^{1+delta}.
struct Decomposition {
  double u_n_value = 0.0;
  std::vector<double> z;  // Z_2..Z_n
  double v_n = 0.0;
  double v_n2 = 0.0;
  double V_n2 = 0.0;
  double L_n = 0.0;
  double delta = 1.0;
  double identity_residual = 0.0;  // |v_n sum z - U_n| / max(|U_n|, v_n)
};

/// inner_mc fresh draws per increment estimate; 0 skips the conditional
/// moments (V_n2 and L_n left at 0) when only the identity matters.
Decomposition ustat_decompose(std::span<const double> y, const PairFn& H,
                              double v_n, double delta, const DrawFn& fresh,
                              int inner_mc, RngStream& rng);

/// Bound value 16 sqrt(eps) exp(-x^2/(4 v_n^2)) + (C/eps^{1+delta}) L_n for
/// the normal-approximation error of P(U_n <= x). C is reported as
/// configurable; no universal value is available.
double berry_esseen_bound(double L_n, double delta, double eps, double x,
                          double v_n, double C = 1.0);

struct CdfDiscrepancyRow {
  long long n = 0;
  double ks = 0.0;     // sup-distance of U/v_hat to the standard normal CDF
  double v_hat = 0.0;  // replicate standard deviation used to normalize
};

/// Builds the statistic for each n, draws reps i.i.d. samples of that size,
/// and reports the Kolmogorov-Smirnov distance of the normalized statistic
/// to the standard normal.
using StatBuilder =
    std::function<std::function<double(std::span<const double>)>(long long)>;

std::vector<CdfDiscrepancyRow> cdf_discrepancy_experiment(
    const StatBuilder& builder, const DrawFn& sampler,
    std::span<const long long> n_list, int reps, std::uint64_t seed,
    int threads = 1);

/// sup_x |ECDF(x) - Phi(x)| of a sample against the standard normal.
double ks_distance_to_normal(std::span<const double> values);

double normal_cdf(double x);

}  // namespace deconv
