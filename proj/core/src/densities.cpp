#include "deconv/densities.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace deconv {

double TailEnvelope::energy_tail_bound(double u0) const {
  if (u0 < from_u)
    throw ParamError("TailEnvelope: bound not valid below from_u");
  if (kind == Kind::Polynomial) {
    // (1/pi) Int_{u0}^inf c^2 u^{-2p} du, needs 2p > 1.
    if (!(2.0 * p > 1.0)) throw ParamError("TailEnvelope: p too small");
    return c * c * std::pow(u0, 1.0 - 2.0 * p) / ((2.0 * p - 1.0) * kPi);
  }
  // Exponential kind: |Phi|^2 <= c^2 exp(-2 alpha u^r). For u >= u0,
  // exp(-2 alpha u^r) <= exp(-2 alpha u0^r) * exp(-2 alpha r u0^{r-1}(u-u0))
  // by convexity of u^r around u0 when r >= 1; for r < 1 fall back to the
  // crude geometric bound with slope at u -> inf unavailable, so integrate
  // the exact envelope numerically coarse.
  if (r >= 1.0) {
    double slope = 2.0 * alpha * r * std::pow(u0, r - 1.0);
    return c * c * std::exp(-2.0 * alpha * std::pow(u0, r)) / (slope * kPi);
  }
  double acc = 0.0;  // coarse Riemann bound, steps of 0.5 until negligible
  const double step = 0.5;
  for (double u = u0; u < u0 + 2000.0; u += step) {
    double t = c * c * std::exp(-2.0 * alpha * std::pow(u, r));
    acc += t * step;
    if (t < 1e-300) break;
  }
  return acc / kPi;
}

namespace densities {

namespace {

double sqr(double x) { return x * x; }

std::vector<double> parse_args(const std::string& spec, std::string& name) {
  auto lp = spec.find('(');
  std::vector<double> args;
  if (lp == std::string::npos) {
    name = spec;
    return args;
  }
  name = spec.substr(0, lp);
  auto rp = spec.rfind(')');
  if (rp == std::string::npos || rp < lp)
    throw ParamError("density spec missing ')': " + spec);
  std::string inner = spec.substr(lp + 1, rp - lp - 1);
  std::stringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParamError("bad numeric argument '" + tok + "' in " + spec);
    }
  }
  return args;
}

}  // namespace

DensitySpec gaussian(double mean, double sd) {
  if (!(sd > 0.0)) throw ParamError("gaussian: sd must be positive");
  DensitySpec d;
  {
    std::ostringstream os;
    os << "gaussian(" << mean << "," << sd << ")";
    d.name = os.str();
  }
  d.pdf = [mean, sd](double x) {
    double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(kTwoPi));
  };
  d.cf = [mean, sd](double u) {
    return std::exp(cx(-0.5 * sqr(sd * u), mean * u));
  };
  d.sampler = [mean, sd](RngStream& r) { return mean + sd * r.normal(); };
  SmoothnessClass c;
  c.alpha = 0.25 * sd * sd;
  c.r = 2.0;
  c.beta = 0.0;
  // (1/2pi) Int exp(-sd^2 u^2 / 2) du = 1/(sd sqrt(2 pi)), plus margin.
  c.L = 1.05 / (sd * std::sqrt(kTwoPi));
  d.smoothness = c;
  d.cf_envelope = TailEnvelope{TailEnvelope::Kind::Exponential, 1.0, 0.0,
                               0.5 * sd * sd, 2.0, 0.0};
  return d;
}

DensitySpec cauchy(double scale) {
  if (!(scale > 0.0)) throw ParamError("cauchy: scale must be positive");
  DensitySpec d;
  {
    std::ostringstream os;
    os << "cauchy(" << scale << ")";
    d.name = os.str();
  }
  d.pdf = [scale](double x) {
    return scale / (kPi * (x * x + scale * scale));
  };
  d.cf = [scale](double u) { return cx(std::exp(-scale * std::abs(u)), 0.0); };
  d.sampler = [scale](RngStream& r) {
    return scale * std::tan(kPi * (r.uniform01() - 0.5));
  };
  SmoothnessClass c;
  c.alpha = 0.5 * scale;
  c.r = 1.0;
  c.beta = 0.0;
  c.L = 1.05 / (kPi * scale);  // (1/2pi) Int exp(-scale |u|) du = 1/(pi scale)
  d.smoothness = c;
  d.cf_envelope =
      TailEnvelope{TailEnvelope::Kind::Exponential, 1.0, 0.0, scale, 1.0, 0.0};
  return d;
}

DensitySpec laplace(double scale) { return sym_gamma(1, scale); }

DensitySpec sym_gamma(int shape, double scale) {
  if (shape < 1 || shape > 4)
    throw ParamError("sym_gamma: integer shape in {1,2,3,4} required");
  if (!(scale > 0.0)) throw ParamError("sym_gamma: scale must be positive");
  DensitySpec d;
  {
    std::ostringstream os;
    if (shape == 1)
      os << "laplace(" << scale << ")";
    else
      os << "symgamma(" << shape << "," << scale << ")";
    d.name = os.str();
  }
  const int k = shape;
  const double th = scale;
  // Density of theta*(G1 - G2), G ~ Gamma(k,1):
  //   f(x) = e^{-t} / (theta (k-1)! 2^k) * sum_j (k-1+j)!/(j!(k-1-j)! 2^j)
  //          * t^{k-1-j},   t = |x|/theta.
  std::vector<double> coef(static_cast<std::size_t>(k));
  {
    auto fact = [](int m) {
      double f = 1.0;
      for (int i = 2; i <= m; ++i) f *= i;
      return f;
    };
    double norm = fact(k - 1) * std::pow(2.0, k) * th;
    for (int j = 0; j < k; ++j)
      coef[static_cast<std::size_t>(j)] =
          fact(k - 1 + j) / (fact(j) * fact(k - 1 - j) * std::pow(2.0, j)) /
          norm;
  }
  d.pdf = [coef, th, k](double x) {
    double t = std::abs(x) / th;
    double poly = 0.0;
    for (int j = 0; j < k; ++j)
      poly += coef[static_cast<std::size_t>(j)] * std::pow(t, k - 1 - j);
    return poly * std::exp(-t);
  };
  d.cf = [th, k](double u) {
    return cx(std::pow(1.0 + sqr(th * u), -k), 0.0);
  };
  d.sampler = [th, k](RngStream& r) {
    double a = static_cast<double>(k);
    return th * (r.gamma(a) - r.gamma(a));
  };
  SmoothnessClass c;
  c.beta = 1.0;
  // (1/2pi) Int u^2 (1+th^2 u^2)^{-2k} du, exact via the beta function.
  c.L = 1.02 * std::exp(std::lgamma(1.5) + std::lgamma(2.0 * k - 1.5) -
                        std::lgamma(2.0 * k)) /
        (kTwoPi * th * th * th);
  d.smoothness = c;
  d.beta_prime = 2.0 * k;
  d.a_cutoff = 1.0 / th;
  d.lower_bound_A = std::pow(2.0 * th * th, -k);
  d.cf_envelope = TailEnvelope{TailEnvelope::Kind::Polynomial,
                               std::pow(th, -2.0 * k), 2.0 * k, 0.0, 0.0, 1e-12};
  return d;
}

DensitySpec gaussian_mixture(double w, double m1, double s1, double m2,
                             double s2) {
  if (!(w >= 0.0 && w <= 1.0)) throw ParamError("mixture: weight must be in [0,1]");
  if (!(s1 > 0.0 && s2 > 0.0)) throw ParamError("mixture: sds must be positive");
  DensitySpec d;
  {
    std::ostringstream os;
    os << "mixture(" << w << "," << m1 << "," << s1 << "," << m2 << "," << s2
       << ")";
    d.name = os.str();
  }
  auto g1 = gaussian(m1, s1);
  auto g2 = gaussian(m2, s2);
  d.pdf = [w, g1, g2](double x) {
    return w * g1.pdf(x) + (1.0 - w) * g2.pdf(x);
  };
  d.cf = [w, g1, g2](double u) {
    return w * g1.cf(u) + (1.0 - w) * g2.cf(u);
  };
  d.sampler = [w, m1, s1, m2, s2](RngStream& r) {
    if (r.uniform01() < w) return m1 + s1 * r.normal();
    return m2 + s2 * r.normal();
  };
  double smin = std::min(s1, s2);
  SmoothnessClass c;
  c.alpha = 0.25 * smin * smin;
  c.r = 2.0;
  c.beta = 0.0;
  c.L = 1.05 / (smin * std::sqrt(kTwoPi));
  d.smoothness = c;
  d.cf_envelope = TailEnvelope{TailEnvelope::Kind::Exponential, 1.0, 0.0,
                               0.5 * smin * smin, 2.0, 0.0};
  return d;
}

DensitySpec point_mass() {
  DensitySpec d;
  d.name = "point";
  d.cf = [](double) { return cx(1.0, 0.0); };
  d.sampler = [](RngStream&) { return 0.0; };
  // No pdf and no smoothness class: this hook is not in L2.
  return d;
}

DensitySpec parse(const std::string& spec) {
  std::string name;
  auto args = parse_args(spec, name);
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw ParamError("density '" + name + "' expects " + std::to_string(n) +
                       " argument(s)");
  };
  if (name == "gaussian" || name == "normal") {
    want(2);
    return gaussian(args[0], args[1]);
  }
  if (name == "cauchy") {
    want(1);
    return cauchy(args[0]);
  }
  if (name == "laplace") {
    want(1);
    return laplace(args[0]);
  }
  if (name == "symgamma") {
    want(2);
    return sym_gamma(static_cast<int>(args[0]), args[1]);
  }
  if (name == "mixture") {
    want(5);
    return gaussian_mixture(args[0], args[1], args[2], args[3], args[4]);
  }
  if (name == "point") return point_mass();
  throw ParamError("unknown density: " + spec);
}

}  // namespace densities
}  // namespace deconv
