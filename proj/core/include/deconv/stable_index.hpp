#pragma once

#include "deconv/common.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace deconv {

enum class DnRecipe { base, density, functional, test };

std::string to_string(DnRecipe r);

/// Parameters of the self-similarity-index estimator: grid bounds
/// (s_lo, s_hi], polynomial lower-bound data (A, beta_prime) of the signal
/// CF, frequency exponent a, and the grid-step recipe. beta_bar feeds the
/// procedure-specific step recipes. Leave a = 0 to pick the context default
/// (1.5 for base/test; s_hi/s_lo + 0.5 for the density/functional paths,
/// which require a > s_hi/s_lo).
struct StableIndexParams {
  double s_lo = 0.5;
  double s_hi = 2.0;
  double beta_prime = 2.0;
  double A = 0.5;
  double a = 0.0;
  DnRecipe d_recipe = DnRecipe::base;
  double beta_bar = 1.0;

  void validate() const;
  /// The exponent actually used, resolving a = 0 to the recipe default.
  double resolved_a() const;
};

/// Probe frequency u_n = (log n/2 - (2 beta' + a s_hi)/(2 s_hi) loglog n)^{1/s_hi}.
/// Throws NTooSmallError with the minimal admissible n when the bracket is
/// not positive.
double frequency_u_n(long long n, const StableIndexParams& sip);

struct SGrid {
  std::vector<double> s;  // equidistant, s.front() == s_lo, s.back() == s_hi
  double step = 0.0;      // actual step after shrinking
  double d_raw = 0.0;     // recipe value before shrinking
};

/// Equidistant grid over [s_lo, s_hi] with step <= the recipe's d_n; the
/// step is shrunk (never enlarged) so both endpoints are grid points.
SGrid build_s_grid(long long n, const StableIndexParams& sip);

/// Pipe classifier: given the ECF modulus at frequency u and the grid,
/// picks the 1-based index k whose band [q Phi^[k], Phi^[k]](u) is closest,
/// via the midpoint rule. Throws NumericError when the midpoint sequence is
/// not strictly decreasing at u (u below the ordering threshold).
int classify_pipe(double ecf_mod, double u, std::span<const double> s_grid,
                  double beta_prime, double A);

struct SIndexEstimate {
  double s_hat = 0.0;
  int branch = 0;  // 1-based grid index chosen
  double u_n = 0.0;
  double d_raw = 0.0;
  double step = 0.0;
  double ecf_mod = 0.0;
  std::vector<double> grid;
};

/// Full estimator: u_n, grid, |ECF(u_n)|, classify. Diagnostics carry every
/// intermediate.
SIndexEstimate estimate_s(std::span<const double> y,
                          const StableIndexParams& sip);

/// Oracle mode: the supplied exact modulus |Phi_p(u)| replaces the ECF.
SIndexEstimate estimate_s_oracle(const std::function<double(double)>& cf_mod,
                                 long long n, const StableIndexParams& sip);

/// The grid point s_k with s_k <= s < s_{k+1} (s == s_hi maps to s_hi).
double s_tilde(double s_true, std::span<const double> s_grid);

}  // namespace deconv
