#pragma once

#include "deconv/common.hpp"
#include "deconv/rng.hpp"

#include <string>
#include <variant>

namespace deconv {

/// Polynomially smooth noise of Laplace type,
///   Phi_g(u) = (1 + gamma^2 u^2)^{-sigma/2},  sigma > 1,
/// so |Phi_g(u)| ~ gamma^{-sigma} |u|^{-sigma}. Sampled exactly as
/// gamma * (G1 - G2) with G ~ Gamma(sigma/2, 1).
struct PolynomialNoise {
  double sigma = 2.0;
  double gamma = 1.0;

  void validate() const {
    if (!(sigma > 1.0)) throw ParamError("polynomial noise: sigma must exceed 1");
    if (!(gamma > 0.0)) throw ParamError("polynomial noise: gamma must be positive");
  }
  double cf_real(double u) const {
    return std::pow(1.0 + gamma * gamma * u * u, -0.5 * sigma);
  }
  double draw(RngStream& r) const {
    return gamma * (r.gamma(0.5 * sigma) - r.gamma(0.5 * sigma));
  }
  /// Tail constant c_g in |Phi_g(u)| ~ c_g |u|^{-sigma}.
  double c_g() const { return std::pow(gamma, -sigma); }
};

/// Symmetric stable noise with Phi_g(u) = exp(-|u|^s), s in (0,2].
/// Drawn with the Chambers-Mallows-Stuck construction; the s = 1 branch
/// is tan(V) explicitly since the generic formula is singular there.
struct StableNoise {
  double s = 1.0;

  void validate() const {
    if (!(s > 0.0 && s <= 2.0)) throw ParamError("stable noise: s must lie in (0,2]");
  }
  double cf_real(double u) const { return std::exp(-std::pow(std::abs(u), s)); }
  double draw(RngStream& r) const;
};

class NoiseSpec {
public:
  NoiseSpec(PolynomialNoise p) : v_(p) { p.validate(); }
  NoiseSpec(StableNoise st) : v_(st) { st.validate(); }

  bool is_polynomial() const { return std::holds_alternative<PolynomialNoise>(v_); }
  bool is_stable() const { return std::holds_alternative<StableNoise>(v_); }
  const PolynomialNoise& poly() const;
  const StableNoise& stable() const;

  /// Real-valued CF (both families are symmetric with real positive CF).
  double cf_real(double u) const;
  CfFn cf() const;
  double draw(RngStream& r) const;
  std::string describe() const;

  /// Parse "poly(2,1)" (sigma, gamma), "stable(1.5)".
  static NoiseSpec parse(const std::string& spec);

private:
  std::variant<PolynomialNoise, StableNoise> v_;
};

}  // namespace deconv
