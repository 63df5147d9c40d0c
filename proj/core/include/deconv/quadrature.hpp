#pragma once

#include "deconv/common.hpp"
#include "deconv/densities.hpp"

#include <optional>
#include <span>
#include <vector>

namespace deconv {

/// Uniform trapezoid rule on [-u_max, u_max]. m_points counts intervals;
/// it is kept even so 0 and the symmetric endpoints are nodes.
struct QuadratureSpec {
  double u_max = 50.0;
  int m_points = 8192;

  void validate() const {
    if (!(u_max > 0.0)) throw ParamError("QuadratureSpec: u_max must be positive");
    if (m_points < 256 || m_points % 2 != 0)
      throw ParamError("QuadratureSpec: m_points must be even and >= 256");
  }
  QuadratureSpec with_u_max(double m) const { return {m, m_points}; }
};

/// Empirical Fourier transform (1/n) sum_j exp(-i u Y_j).
cx ecf(std::span<const double> y, double u);

/// sum_j exp(-i u Y_j) evaluated at u = u0 + k du, k = 0..count-1, into out.
/// Uses one complex rotation per sample point and grid step, so a full grid
/// costs n*count multiplies instead of n*count exponentials. The sample is
/// consumed in the given order; sort beforehand when bit-stable aggregation
/// across permutations matters.
void ecf_sum_on_grid(std::span<const double> y, double u0, double du,
                     std::size_t count, cx* out);

/// (1/2pi) Int_{-u_max}^{u_max} A(u) conj(B(u)) du, trapezoid.
cx parseval_inner(const CfFn& a, const CfFn& b, const QuadratureSpec& quad);

struct TailEnergyResult {
  double value = 0.0;             // (1/2pi) Int_{cutoff < |u| <= u_max} |cf|^2
  double remainder_bound = 0.0;   // envelope bound beyond u_max, 0 if unknown
};

/// Energy of a CF beyond a cutoff frequency. Requires u_max > cutoff.
/// Pass the density's envelope to get a certified truncation remainder.
TailEnergyResult tail_energy(const CfFn& cf, double cutoff,
                             const QuadratureSpec& quad,
                             const std::optional<TailEnvelope>& env = {});

/// (1/2pi) Int_{|u|<=u_max} |Phi_f|^2 |u|^{2 beta} exp(2 alpha |u|^r) du.
/// Compare against c.L for membership. Throws NumericError when the
/// integrand is still growing at the truncation edge.
double class_membership_integral(const DensitySpec& f, const SmoothnessClass& c,
                                 const QuadratureSpec& quad);

}  // namespace deconv
