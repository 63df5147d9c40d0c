#pragma once

#include "deconv/common.hpp"
#include "deconv/rng.hpp"
#include "deconv/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace deconv {

/// Decay envelope for |Phi(u)|, valid for |u| >= from_u. Used to bound the
/// truncation remainder of tail integrals.
struct TailEnvelope {
  enum class Kind { Polynomial, Exponential };
  Kind kind = Kind::Polynomial;
  double c = 1.0;      // leading constant
  double p = 2.0;      // |Phi| <= c |u|^-p          (polynomial)
  double alpha = 0.0;  // |Phi| <= c exp(-alpha |u|^r) (exponential)
  double r = 0.0;
  double from_u = 1.0;

  /// Upper bound on (1/2pi) Int_{|u| > u0} |Phi|^2 du, requires u0 >= from_u.
  double energy_tail_bound(double u0) const;
};

/// Catalog entry for a signal density with closed-form pdf and Fourier
/// transform. All catalog members have |Phi(0)| = 1, |Phi| <= 1, Hermitian
/// Phi, and an exact sampler.
struct DensitySpec {
  std::string name;
  std::function<double(double)> pdf;
  CfFn cf;
  std::function<double(RngStream&)> sampler;
  std::optional<SmoothnessClass> smoothness;
  // Polynomial lower bound |Phi(u)| >= A |u|^-beta_prime for |u| >= a_cutoff.
  std::optional<double> lower_bound_A;
  std::optional<double> beta_prime;
  std::optional<double> a_cutoff;
  std::optional<TailEnvelope> cf_envelope;

  bool has_pipe_bound() const {
    return lower_bound_A && beta_prime && a_cutoff;
  }
};

namespace densities {

DensitySpec gaussian(double mean, double sd);
DensitySpec cauchy(double scale);
DensitySpec laplace(double scale);
/// Difference of two Gamma(shape, scale) variables; integer shape in {1,..,4}
/// so the pdf stays elementary. shape = 1 reduces to Laplace.
DensitySpec sym_gamma(int shape, double scale);
/// w N(m1, s1^2) + (1-w) N(m2, s2^2); the workhorse alternative for power
/// studies.
DensitySpec gaussian_mixture(double w, double m1, double s1, double m2,
                             double s2);
/// Point mass at 0 (testing hook: Y is then distributed as the noise).
/// Has no pdf and no smoothness class.
DensitySpec point_mass();

/// Parse "gaussian(0,1)", "laplace(1)", "cauchy(1)", "symgamma(2,1)",
/// "mixture(0.5,-1,0.6,1,0.6)", "point". Throws ParamError on anything else.
DensitySpec parse(const std::string& spec);

}  // namespace densities
}  // namespace deconv
