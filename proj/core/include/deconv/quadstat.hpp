#pragma once

#include "deconv/densities.hpp"
#include "deconv/kernels.hpp"
#include "deconv/quadrature.hpp"

#include <optional>
#include <span>

namespace deconv {

enum class QuadStatPath { fast, reference };

struct QuadStatResult {
  double value = 0.0;       // the statistic, f0 tail included when f0 given
  double f0_tail = 0.0;     // (1/2pi) Int_{|u|>cutoff} |Phi_0|^2, 0 without f0
  double h = 0.0;           // bandwidth implied by the kernel cutoff
  std::size_t n = 0;
  QuadStatPath path = QuadStatPath::fast;
  double imag_residue = 0.0;

  /// Statistic with the deterministic f0-tail constant removed; under H0
  /// this is the centered, degenerate pair statistic.
  double centered() const { return value - f0_tail; }
};

/// Pair statistic 2/(n(n-1)) sum_{k<j} <K_h(.-Y_k) - f0, K_h(.-Y_j) - f0>,
/// evaluated in the Fourier domain. With f0 absent the f0 terms drop and the
/// statistic estimates Int f^2. The fast path costs O(n m) via
/// |sum_k g_k|^2 - sum_k |g_k|^2; the reference path sums all pairwise
/// quadratures directly and exists to cross-check the fast one.
QuadStatResult quad_stat(std::span<const double> y, const KernelCF& kernel,
                         const std::optional<CfFn>& f0_cf,
                         const QuadratureSpec& quad,
                         QuadStatPath path = QuadStatPath::fast,
                         const std::optional<TailEnvelope>& f0_env = {});

struct XDomainGrid {
  double x_max = 2000.0;
  double dx = 0.05;
  int inversion_points = 65536;  // for kernels without a closed x form

  void validate() const {
    if (!(x_max >= 40.0)) throw ParamError("XDomainGrid: x_max must be >= 40");
    if (!(dx > 0.0 && dx <= 0.25)) throw ParamError("XDomainGrid: dx in (0,0.25] required");
  }
};

/// Brute-force oracle for quad_stat: evaluates K_h(x - Y_k) - f0(x) pointwise
/// on an x grid and forms the pairwise inner products by trapezoid in x, with
/// an analytic correction for the sinc tail beyond x_max. O(n^2 |xgrid|);
/// refuses n > 20.
double quad_stat_xdomain_oracle(std::span<const double> y,
                                const KernelCF& kernel, const DensitySpec& f0,
                                const XDomainGrid& xgrid);

/// x-domain evaluation of the deconvolution kernel K_h at z (exact
/// antiderivatives for integer-order polynomial kernels, numerical Fourier
/// inversion otherwise). Exposed for tests.
double kernel_x_eval(const KernelCF& kernel, double z, int inversion_points);

}  // namespace deconv
