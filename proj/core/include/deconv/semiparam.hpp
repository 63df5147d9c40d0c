#pragma once

#include "deconv/quadrature.hpp"
#include "deconv/stable_index.hpp"

#include <span>

namespace deconv {

enum class PluginMode { density_at_x, quadratic_functional };

struct PluginEstimate {
  double value = 0.0;
  double s_hat = 0.0;
  double h = 0.0;
  PluginMode mode = PluginMode::density_at_x;
  DnRecipe recipe = DnRecipe::base;  // grid-step recipe actually used
  SIndexEstimate s_diag;
};

/// Plug-in deconvolution density estimate at x under stable noise with
/// estimated index: Fourier inversion of exp(|u|^s_hat) * ECF over
/// |u| <= 1/h with the estimation-variant bandwidth. Grid-step recipe is
/// forced to the density recipe; requires beta_bar > 1/2.
PluginEstimate estimate_density_at(std::span<const double> y, double x,
                                   const StableIndexParams& sip,
                                   double beta_bar, const QuadratureSpec& quad);

/// Same computation with the index supplied directly (the oracle the
/// plug-in coincides with whenever s_hat lands on s_tilde).
double density_at_given_s(std::span<const double> y, double x, double s,
                          double beta_bar, const QuadratureSpec& quad);

/// Plug-in estimator of Int f^2 under stable noise with estimated index.
/// Grid-step recipe forced to the functional recipe; requires beta_bar > 0.
PluginEstimate estimate_quadratic_functional(std::span<const double> y,
                                             const StableIndexParams& sip,
                                             double beta_bar,
                                             const QuadratureSpec& quad);

double quad_functional_given_s(std::span<const double> y, double s,
                               double beta_bar, const QuadratureSpec& quad);

}  // namespace deconv
