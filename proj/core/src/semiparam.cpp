#include "deconv/semiparam.hpp"

#include "deconv/kernels.hpp"
#include "deconv/quadstat.hpp"

#include <cmath>
#include <vector>

namespace deconv {

double density_at_given_s(std::span<const double> y, double x, double s,
                          double beta_bar, const QuadratureSpec& quad) {
  quad.validate();
  if (y.empty()) throw ParamError("density_at_given_s: empty sample");
  const auto n = static_cast<long long>(y.size());
  const double h =
      bandwidth_semiparam(n, s, beta_bar, BandwidthVariant::estimation);
  KernelCF k = kernel_stable(h, s);  // overflow guard lives here

  // (1/2pi) Int_{|u|<=1/h} e^{-iux} e^{|u|^s} ecf(u) du, trapezoid. The
  // integrand is Hermitian up to ECF noise, so the imaginary part must
  // vanish to quadrature accuracy.
  const double c = k.support_cutoff;
  const auto nodes = static_cast<std::size_t>(quad.m_points) + 1;
  const double du = 2.0 * c / quad.m_points;
  std::vector<double> ys(y.begin(), y.end());
  std::sort(ys.begin(), ys.end());
  std::vector<cx> ecf_sum(nodes);
  ecf_sum_on_grid(ys, -c, du, nodes, ecf_sum.data());
  cx acc(0.0, 0.0);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double u = -c + static_cast<double>(j) * du;
    const double w = (j == 0 || j + 1 == nodes) ? 0.5 : 1.0;
    const cx val = std::exp(cx(0.0, -u * x)) * k.cf(u).real() *
                   (ecf_sum[j] / static_cast<double>(n));
    acc += w * val;
  }
  acc *= du / kTwoPi;
  if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, std::abs(acc.real())))
    throw NumericError("density_at_given_s: Hermitian residue exceeds 1e-9");
  return acc.real();
}

PluginEstimate estimate_density_at(std::span<const double> y, double x,
                                   const StableIndexParams& sip,
                                   double beta_bar,
                                   const QuadratureSpec& quad) {
  if (!(beta_bar > 0.5))
    throw ParamError("estimate_density_at: beta_bar must exceed 1/2");
  StableIndexParams s = sip;
  s.d_recipe = DnRecipe::density;
  s.beta_bar = beta_bar;
  SIndexEstimate est = estimate_s(y, s);
  PluginEstimate out;
  out.mode = PluginMode::density_at_x;
  out.recipe = s.d_recipe;
  out.s_hat = est.s_hat;
  out.s_diag = std::move(est);
  out.value = density_at_given_s(y, x, out.s_hat, beta_bar, quad);
  out.h = bandwidth_semiparam(static_cast<long long>(y.size()), out.s_hat,
                              beta_bar, BandwidthVariant::estimation);
  return out;
}

double quad_functional_given_s(std::span<const double> y, double s,
                               double beta_bar, const QuadratureSpec& quad) {
  if (y.size() < 2) throw ParamError("quad_functional_given_s: need n >= 2");
  const auto n = static_cast<long long>(y.size());
  const double h =
      bandwidth_semiparam(n, s, beta_bar, BandwidthVariant::estimation);
  KernelCF k = kernel_stable(h, s);
  return quad_stat(y, k, std::nullopt, quad).value;
}

PluginEstimate estimate_quadratic_functional(std::span<const double> y,
                                             const StableIndexParams& sip,
                                             double beta_bar,
                                             const QuadratureSpec& quad) {
  if (!(beta_bar > 0.0))
    throw ParamError("estimate_quadratic_functional: beta_bar must be positive");
  StableIndexParams s = sip;
  s.d_recipe = DnRecipe::functional;
  s.beta_bar = beta_bar;
  SIndexEstimate est = estimate_s(y, s);
  PluginEstimate out;
  out.mode = PluginMode::quadratic_functional;
  out.recipe = s.d_recipe;
  out.s_hat = est.s_hat;
  out.s_diag = std::move(est);
  out.value = quad_functional_given_s(y, out.s_hat, beta_bar, quad);
  out.h = bandwidth_semiparam(static_cast<long long>(y.size()), out.s_hat,
                              beta_bar, BandwidthVariant::estimation);
  return out;
}

}  // namespace deconv
