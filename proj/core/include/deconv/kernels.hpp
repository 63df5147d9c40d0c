#pragma once

#include "deconv/common.hpp"
#include "deconv/noise.hpp"

#include <optional>
#include <string>

namespace deconv {

/// Deconvolution kernel, described in the Fourier domain. cf vanishes for
/// |u| > support_cutoff and is Hermitian (real, even) for the symmetric
/// noise families in the catalog.
struct KernelCF {
  CfFn cf;
  double support_cutoff = 1.0;
  std::string provenance;
  // Set when the kernel came from a polynomial-noise recipe; enables the
  // closed-form x-domain evaluation used by the brute-force oracle.
  std::optional<PolynomialNoise> poly_src;
  // Set for the stable-noise recipe: effective CF is exp(|u|^s) on support.
  std::optional<double> stable_s;
};

/// Sinc-window deconvolution kernel for polynomial noise:
///   cf(u) = 1 / Phi_g(u) on |u| <= 1/h, 0 outside.  Requires 0 < h < 1.
KernelCF kernel_poly(double h, const PolynomialNoise& g);

/// Deconvolution kernel for stable noise with estimated index, in effective
/// frequency form: cf(u) = exp(|u|^s_hat) on |u| <= 1/h, 0 outside.
/// Guards against exp overflow at the cutoff and reports the largest
/// representable cutoff in the error message.
KernelCF kernel_stable(double h, double s_hat);

struct Tau {
  double alpha = 0.0;
  double r = 0.0;
  double beta = 0.0;
};

/// One point of an adaptive test grid: smoothness triple, bandwidth,
/// squared testing threshold. lll_clamped marks thresholds whose
/// sqrt(log log log n) factor was clamped below at 1 (asymptotic regime
/// not yet reached at this n).
struct GridPoint {
  Tau tau;
  double h = 0.0;
  double t2 = 0.0;
  bool lll_clamped = false;
};

struct BandwidthThreshold {
  double h = 0.0;
  double t2 = 0.0;
  bool lll_clamped = false;
};

/// Sobolev-beta recipe under polynomial noise, loglog-penalized:
///   h  = (n / sqrt(log log n))^{-2/(4 beta + 4 sigma + 1)}
///   t2 = (n / sqrt(log log n))^{-4 beta/(4 beta + 4 sigma + 1)}
/// Note t2 == h^{2 beta} exactly. Requires n >= 16.
BandwidthThreshold bandwidth_threshold_sobolev(long long n, double beta,
                                               double sigma);

/// Pure-polynomial variant used for the final grid point (supersmooth
/// alternatives): h = n^{-2/(4 beta_bar + 4 sigma + 1)}, t2 = h^{2 beta_bar}.
BandwidthThreshold bandwidth_threshold_polynomial(long long n, double beta_bar,
                                                  double sigma);

/// Supersmooth-r recipe (supersmooth null under polynomial noise):
///   h  = (log n / (2c))^{-1/r},  requires 0 < c < alpha_lo exp(-1/r_lo)
///   t2 = (log n)^{(4 sigma + 1)/(2r)} / n * sqrt(max(log log log n, 1)).
/// Pass the grid-wide (alpha_lo, r_lo) pinning the admissible range of c.
BandwidthThreshold bandwidth_threshold_supersmooth(long long n, double r,
                                                   double sigma, double c,
                                                   double alpha_lo,
                                                   double r_lo);

enum class BandwidthVariant { estimation, test };

/// Plug-in bandwidth for stable noise with estimated index s_hat:
///   estimation: (log n/2 - (beta_bar - s + 1/2)/s * log log n)^{-1/s}
///   test:       (log n/2 - (2 beta_bar / s) * log log n)^{-1/s}
/// Throws NTooSmallError (with the minimal admissible n) when the bracket
/// is not positive.
double bandwidth_semiparam(long long n, double s_hat, double beta_bar,
                           BandwidthVariant variant);

enum class RateRegime {
  sobolev_penalized,      // (n/sqrt(loglog n))^{-2 beta/(4 beta + 4 sigma + 1)}
  polynomial,             // n^{-2 beta_bar/(4 beta_bar + 4 sigma + 1)}
  supersmooth_penalized,  // (log n)^{(4 sigma+1)/(4r)}/sqrt(n) * (logloglog n)^{1/4}
  stable_log,             // (log n / 2)^{-beta/s}
};

struct RateParams {
  double beta = 1.0;
  double beta_bar = 1.0;
  double sigma = 2.0;
  double r = 1.0;
  double s = 1.0;
};

/// Separation rate psi_{n}: alternatives with ||f - f0||^2 >= C psi^2 are
/// detectable. Used for reporting and for placing alternatives.
double testing_rate(RateRegime regime, long long n, const RateParams& p);

}  // namespace deconv
