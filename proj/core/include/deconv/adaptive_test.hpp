#pragma once

#include "deconv/densities.hpp"
#include "deconv/kernels.hpp"
#include "deconv/noise.hpp"
#include "deconv/quadstat.hpp"
#include "deconv/stable_index.hpp"

#include <optional>
#include <span>
#include <vector>

namespace deconv {

enum class GridRegime {
  ordinary_null,     // f0 in a Sobolev class: beta ladder + one final point
  supersmooth_null,  // f0 supersmooth: beta ladder + r ladder
};

struct GridBounds {
  double alpha_lo = 0.5;
  double alpha_hi = 1.0;
  double r_lo = 0.0;
  double r_hi = 2.0;
  double beta_lo = 0.5;
  double beta_hi = 1.0;
};

struct AdaptiveGrid {
  GridRegime regime = GridRegime::ordinary_null;
  std::vector<GridPoint> points;
  int n_beta = 0;  // number of beta-ladder points
  int n_r = 0;     // r-ladder points (supersmooth regime) or 1 (final point)
  long long n = 0;
  double sigma = 2.0;
  double c = 0.0;  // supersmooth bandwidth constant, 0 when unused
};

/// Builds the adaptive grid over the smoothness set. The beta ladder has
/// ceil(log n) equispaced points from beta_lo to beta_hi (one point when the
/// bounds coincide). The ordinary regime appends the pure-polynomial point
/// tau = (alpha_lo, r_hi, 0); the supersmooth regime appends
/// ceil(loglog n / (r_hi - r_lo)) r-points. Pass c = 0 for the default
/// 0.9 * alpha_lo * exp(-1/r_lo).
AdaptiveGrid build_grid(GridRegime regime, long long n, const GridBounds& b,
                        double sigma, double c = 0.0);

struct PerPointResult {
  Tau tau;
  double h = 0.0;
  double t2 = 0.0;
  double stat = 0.0;   // T at this grid point
  double ratio = 0.0;  // |T| / t2
};

struct TestOutcome {
  bool reject = false;
  double max_ratio = 0.0;
  std::optional<int> trigger_index;  // 0-based argmax when rejecting
  std::vector<PerPointResult> per_point;
  double c_star = 0.0;
  // Filled by the stable-noise test only.
  std::optional<SIndexEstimate> s_estimate;
};

/// sup_i |T_i| / t_i^2 over the grid for one sample (the decision statistic).
TestOutcome evaluate_grid(std::span<const double> y, const AdaptiveGrid& grid,
                          const DensitySpec& f0, const NoiseSpec& g,
                          const QuadratureSpec& quad, double c_star);

/// Threshold constant tuned by Monte Carlo under H0: the empirical
/// (1 - eps/2) quantile of the max-ratio statistic over reps null
/// replications (geometric-ladder snap below 2000 reps). eps = 1 returns 0.
double calibrate_cstar(const DensitySpec& f0, const NoiseSpec& g, long long n,
                       const AdaptiveGrid& grid, double eps, int reps,
                       std::uint64_t seed, const QuadratureSpec& quad,
                       int threads = 1);

/// Adaptive goodness-of-fit test under polynomial noise: evaluates T at
/// every grid point and rejects iff sup_i |T_i|/t_i^2 > c_star.
TestOutcome run_test_poly(std::span<const double> y, const AdaptiveGrid& grid,
                          double c_star, const DensitySpec& f0,
                          const NoiseSpec& g, const QuadratureSpec& quad);

/// Goodness-of-fit test under stable noise with unknown index: estimates
/// s_hat, forms the random bandwidth and threshold
///   h = (log n/2 - (2 beta_bar/s_hat) loglog n)^{-1/s_hat},
///   t2 = (log n/2)^{-2 beta_bar/s_hat},
/// computes the pair statistic against f0 and applies the same rule.
/// The grid-step recipe is forced to the test recipe.
TestOutcome run_test_stable(std::span<const double> y, const DensitySpec& f0,
                            const StableIndexParams& sip, double beta_bar,
                            double c_star, const QuadratureSpec& quad);

/// Same decision path with the stable index supplied instead of estimated
/// (the oracle the plug-in must coincide with on {s_hat == s_tilde}).
TestOutcome run_test_stable_given_s(std::span<const double> y,
                                    const DensitySpec& f0, double s,
                                    double beta_bar, double c_star,
                                    const QuadratureSpec& quad);

}  // namespace deconv
