#include "deconv/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace deconv {

namespace {

void require_n16(long long n) {
  if (n < 16) throw NTooSmallError("sample size must be at least 16", 16);
}

double loglog(long long n) { return std::log(std::log(static_cast<double>(n))); }

}  // namespace

KernelCF kernel_poly(double h, const PolynomialNoise& g) {
  g.validate();
  if (!(h > 0.0 && h < 1.0))
    throw ParamError("kernel_poly: bandwidth must lie in (0,1)");
  KernelCF k;
  const double cutoff = 1.0 / h;
  PolynomialNoise gc = g;
  k.cf = [gc, cutoff](double u) {
    if (std::abs(u) > cutoff) return cx(0.0, 0.0);
    return cx(1.0 / gc.cf_real(u), 0.0);
  };
  k.support_cutoff = cutoff;
  k.poly_src = g;
  std::ostringstream os;
  os << "poly(sigma=" << g.sigma << ",gamma=" << g.gamma << ",h=" << h << ")";
  k.provenance = os.str();
  return k;
}

KernelCF kernel_stable(double h, double s_hat) {
  if (!(h > 0.0)) throw ParamError("kernel_stable: bandwidth must be positive");
  if (!(s_hat > 0.0 && s_hat <= 2.0))
    throw ParamError("kernel_stable: s_hat must lie in (0,2]");
  const double cutoff = 1.0 / h;
  const double max_exp = std::log(std::numeric_limits<double>::max()) - 4.0;
  if (std::pow(cutoff, s_hat) > max_exp) {
    std::ostringstream os;
    os << "kernel_stable: exp((1/h)^s) overflows for h=" << h << ", s=" << s_hat
       << "; largest representable cutoff is " << std::pow(max_exp, 1.0 / s_hat)
       << " (h >= " << 1.0 / std::pow(max_exp, 1.0 / s_hat) << ")";
    throw NumericError(os.str());
  }
  KernelCF k;
  k.cf = [cutoff, s_hat](double u) {
    double au = std::abs(u);
    if (au > cutoff) return cx(0.0, 0.0);
    return cx(std::exp(std::pow(au, s_hat)), 0.0);
  };
  k.support_cutoff = cutoff;
  k.stable_s = s_hat;
  std::ostringstream os;
  os << "stable(s=" << s_hat << ",h=" << h << ")";
  k.provenance = os.str();
  return k;
}

BandwidthThreshold bandwidth_threshold_sobolev(long long n, double beta,
                                               double sigma) {
  require_n16(n);
  if (!(beta >= 0.0)) throw ParamError("beta must be >= 0");
  if (!(sigma > 1.0)) throw ParamError("sigma must exceed 1");
  const double base = static_cast<double>(n) / std::sqrt(loglog(n));
  const double den = 4.0 * beta + 4.0 * sigma + 1.0;
  BandwidthThreshold out;
  out.h = std::pow(base, -2.0 / den);
  out.t2 = std::pow(base, -4.0 * beta / den);
  return out;
}

BandwidthThreshold bandwidth_threshold_polynomial(long long n, double beta_bar,
                                                  double sigma) {
  require_n16(n);
  if (!(beta_bar >= 0.0)) throw ParamError("beta_bar must be >= 0");
  if (!(sigma > 1.0)) throw ParamError("sigma must exceed 1");
  const double den = 4.0 * beta_bar + 4.0 * sigma + 1.0;
  BandwidthThreshold out;
  out.h = std::pow(static_cast<double>(n), -2.0 / den);
  out.t2 = std::pow(static_cast<double>(n), -4.0 * beta_bar / den);
  return out;
}

BandwidthThreshold bandwidth_threshold_supersmooth(long long n, double r,
                                                   double sigma, double c,
                                                   double alpha_lo,
                                                   double r_lo) {
  require_n16(n);
  if (!(r > 0.0 && r <= 2.0)) throw ParamError("r must lie in (0,2]");
  if (!(sigma > 1.0)) throw ParamError("sigma must exceed 1");
  if (!(r_lo > 0.0)) throw ParamError("r_lo must be positive");
  const double c_max = alpha_lo * std::exp(-1.0 / r_lo);
  if (!(c > 0.0 && c < c_max)) {
    std::ostringstream os;
    os << "supersmooth recipe: c must lie in (0, " << c_max
       << ") = (0, alpha_lo exp(-1/r_lo))";
    throw ParamError(os.str());
  }
  const double ln = std::log(static_cast<double>(n));
  BandwidthThreshold out;
  out.h = std::pow(ln / (2.0 * c), -1.0 / r);
  double lll = std::log(std::log(ln));
  out.lll_clamped = lll < 1.0;
  out.t2 = std::pow(ln, (4.0 * sigma + 1.0) / (2.0 * r)) /
           static_cast<double>(n) * std::sqrt(std::max(lll, 1.0));
  return out;
}

double bandwidth_semiparam(long long n, double s_hat, double beta_bar,
                           BandwidthVariant variant) {
  require_n16(n);
  if (!(s_hat > 0.0 && s_hat <= 2.0))
    throw ParamError("bandwidth_semiparam: s_hat must lie in (0,2]");
  if (!(beta_bar > 0.0))
    throw ParamError("bandwidth_semiparam: beta_bar must be positive");
  const double coef = variant == BandwidthVariant::estimation
                          ? (beta_bar - s_hat + 0.5) / s_hat
                          : 2.0 * beta_bar / s_hat;
  auto bracket = [&](long long m) {
    return 0.5 * std::log(static_cast<double>(m)) - coef * loglog(m);
  };
  const double b = bracket(n);
  if (!(b > 0.0)) {
    long long min_n = min_n_satisfying([&](long long m) { return bracket(m) > 0.0; });
    std::ostringstream os;
    os << "bandwidth_semiparam: log-bracket is not positive at n=" << n
       << "; smallest admissible n is about " << min_n;
    throw NTooSmallError(os.str(), min_n);
  }
  return std::pow(b, -1.0 / s_hat);
}

double testing_rate(RateRegime regime, long long n, const RateParams& p) {
  require_n16(n);
  const double nd = static_cast<double>(n);
  switch (regime) {
    case RateRegime::sobolev_penalized: {
      const double base = nd / std::sqrt(loglog(n));
      return std::pow(base, -2.0 * p.beta / (4.0 * p.beta + 4.0 * p.sigma + 1.0));
    }
    case RateRegime::polynomial:
      return std::pow(nd, -2.0 * p.beta_bar /
                              (4.0 * p.beta_bar + 4.0 * p.sigma + 1.0));
    case RateRegime::supersmooth_penalized: {
      if (!(p.r > 0.0)) throw ParamError("testing_rate: r must be positive");
      double ln = std::log(nd);
      double lll = std::max(std::log(std::log(ln)), 1.0);
      return std::pow(ln, (4.0 * p.sigma + 1.0) / (4.0 * p.r)) / std::sqrt(nd) *
             std::pow(lll, 0.25);
    }
    case RateRegime::stable_log:
      if (!(p.s > 0.0)) throw ParamError("testing_rate: s must be positive");
      return std::pow(0.5 * std::log(nd), -p.beta / p.s);
  }
  throw ParamError("testing_rate: unknown regime");
}

}  // namespace deconv
