#pragma once

#include "deconv/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace deconv {

/// Smoothness parameters (alpha, r, beta) and radius L of the class
///   { f : (1/2pi) Int |Phi(u)|^2 |u|^{2 beta} exp(2 alpha |u|^r) du <= L }.
/// r = 0 is the Sobolev (ordinary smooth) case, r > 0 the supersmooth one.
/// alpha = 0 is admitted in the Sobolev case; such triples appear as grid
/// points of the adaptive tests.
struct SmoothnessClass {
  double alpha = 0.0;
  double r = 0.0;
  double beta = 0.0;
  double L = 1.0;

  void validate() const {
    if (!(alpha >= 0.0)) throw ParamError("SmoothnessClass: alpha must be >= 0");
    if (!(r >= 0.0 && r <= 2.0)) throw ParamError("SmoothnessClass: r must lie in [0,2]");
    if (!(beta >= 0.0)) throw ParamError("SmoothnessClass: beta must be >= 0");
    if (!(L > 0.0)) throw ParamError("SmoothnessClass: L must be positive");
    if (!(beta > 0.0) && !(r > 0.0 && alpha > 0.0))
      throw ParamError("SmoothnessClass: need beta > 0, or r > 0 with alpha > 0");
  }
};

/// Observations Y_1..Y_n from the convolution model, with provenance.
struct Sample {
  std::vector<double> y;
  std::uint64_t seed = 0;
  std::string signal_name;  // density of X
  std::string noise_name;   // density of eps

  std::size_t n() const { return y.size(); }
};

}  // namespace deconv
