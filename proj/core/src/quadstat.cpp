#include "deconv/quadstat.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace deconv {

namespace {

std::vector<double> sorted_copy(std::span<const double> y) {
  std::vector<double> ys(y.begin(), y.end());
  std::sort(ys.begin(), ys.end());
  return ys;
}

struct SupportGrid {
  double c = 0.0;
  double du = 0.0;
  std::size_t nodes = 0;
  double u(std::size_t j) const { return -c + static_cast<double>(j) * du; }
  double w(std::size_t j) const {
    return (j == 0 || j + 1 == nodes) ? 0.5 * du : du;
  }
};

SupportGrid make_support_grid(const KernelCF& kernel,
                              const QuadratureSpec& quad) {
  SupportGrid g;
  g.c = kernel.support_cutoff;
  g.nodes = static_cast<std::size_t>(quad.m_points) + 1;
  g.du = 2.0 * g.c / quad.m_points;
  return g;
}

}  // namespace

QuadStatResult quad_stat(std::span<const double> y, const KernelCF& kernel,
                         const std::optional<CfFn>& f0_cf,
                         const QuadratureSpec& quad, QuadStatPath path,
                         const std::optional<TailEnvelope>& f0_env) {
  quad.validate();
  const std::size_t n = y.size();
  if (n < 2) throw ParamError("quad_stat: need n >= 2");

  const auto ys = sorted_copy(y);
  const auto grid = make_support_grid(kernel, quad);

  std::vector<cx> kcf(grid.nodes);
  double kmax = 0.0;
  for (std::size_t j = 0; j < grid.nodes; ++j) {
    kcf[j] = kernel.cf(grid.u(j));
    kmax = std::max(kmax, std::abs(kcf[j]));
  }
  if (kmax * static_cast<double>(n) > 1e150)
    throw NumericError("quad_stat: kernel magnitude overflows the statistic");

  std::vector<cx> phi0;
  if (f0_cf) {
    phi0.resize(grid.nodes);
    for (std::size_t j = 0; j < grid.nodes; ++j) phi0[j] = (*f0_cf)(grid.u(j));
  }

  double support_value = 0.0;
  double imag_residue = 0.0;

  if (path == QuadStatPath::fast) {
    // sum_k exp(-i u Y_k); conjugate gives sum_k exp(+i u Y_k).
    std::vector<cx> s(grid.nodes);
    ecf_sum_on_grid(ys, -grid.c, grid.du, grid.nodes, s.data());
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.nodes; ++j) {
      const cx e_plus = std::conj(s[j]);
      const cx g_sum = f0_cf ? e_plus * kcf[j] - static_cast<double>(n) * phi0[j]
                             : e_plus * kcf[j];
      double sum_sq = static_cast<double>(n) * std::norm(kcf[j]);
      if (f0_cf) {
        sum_sq += static_cast<double>(n) * std::norm(phi0[j]) -
                  2.0 * std::real(std::conj(phi0[j]) * kcf[j] * e_plus);
      }
      acc += grid.w(j) * 0.5 * (std::norm(g_sum) - sum_sq);
    }
    support_value = acc / kTwoPi;
  } else {
    // Reference path: explicit pairwise quadratures.
    std::vector<std::vector<cx>> gk(n, std::vector<cx>(grid.nodes));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < grid.nodes; ++j) {
        cx e = std::exp(cx(0.0, grid.u(j) * ys[k]));
        gk[k][j] = f0_cf ? e * kcf[j] - phi0[j] : e * kcf[j];
      }
    cx acc(0.0, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t j2 = k + 1; j2 < n; ++j2) {
        cx pair(0.0, 0.0);
        for (std::size_t j = 0; j < grid.nodes; ++j)
          pair += grid.w(j) * gk[k][j] * std::conj(gk[j2][j]);
        acc += pair;
      }
    acc /= kTwoPi;
    imag_residue = std::abs(acc.imag());
    if (imag_residue > 1e-9 * std::max(1.0, std::abs(acc.real())))
      throw NumericError("quad_stat: imaginary residue exceeds 1e-9");
    support_value = acc.real();
  }

  QuadStatResult res;
  res.n = n;
  res.h = 1.0 / kernel.support_cutoff;
  res.path = path;
  res.imag_residue = imag_residue;
  const double scale = 2.0 / (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
  res.value = scale * support_value;
  if (f0_cf) {
    // The inner product runs over all frequencies; beyond the kernel support
    // only the f0 terms survive and add the same constant to every pair.
    res.f0_tail = tail_energy(*f0_cf, grid.c, quad, f0_env).value;
    res.value += res.f0_tail;
  }
  return res;
}

// ---------------------------------------------------------------------------
// x-domain oracle

namespace {

// Int_0^c u^m cos(uz) du and Int_0^c u^m sin(uz) du for m <= 8, exact
// recursions for |z| away from 0, Taylor series near 0.
void moment_integrals(double c, double z, int m_max, double* ic, double* is) {
  for (int m = 0; m <= m_max; ++m) ic[m] = is[m] = 0.0;
  if (std::abs(z) < 0.5) {
    // sum_t (-1)^t z^{2t}/(2t)! c^{m+2t+1}/(m+2t+1) and the sine analogue.
    for (int m = 0; m <= m_max; ++m) {
      double term_c = 0.0, term_s = 0.0, fact = 1.0, zp = 1.0;
      for (int t = 0; t < 24; ++t) {
        // cosine: z^{2t}/(2t)!;  sine: z^{2t+1}/(2t+1)!
        term_c += ((t % 2 == 0) ? 1.0 : -1.0) * zp / fact *
                  std::pow(c, m + 2 * t + 1) / (m + 2 * t + 1);
        double zp_s = zp * z;
        double fact_s = fact * (2 * t + 1);
        term_s += ((t % 2 == 0) ? 1.0 : -1.0) * zp_s / fact_s *
                  std::pow(c, m + 2 * t + 2) / (m + 2 * t + 2);
        zp *= z * z;
        fact *= (2 * t + 1) * (2 * t + 2);
      }
      ic[m] = term_c;
      is[m] = term_s;
    }
    return;
  }
  const double sc = std::sin(c * z), cc = std::cos(c * z);
  ic[0] = sc / z;
  is[0] = (1.0 - cc) / z;
  double cm = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    cm *= c;
    ic[m] = (cm * sc - m * is[m - 1]) / z;
    is[m] = (-cm * cc + m * ic[m - 1]) / z;
  }
}

bool poly_kernel_is_integer_order(const PolynomialNoise& g) {
  double half = 0.5 * g.sigma;
  return std::abs(half - std::round(half)) < 1e-12 && half <= 4.5;
}

double poly_kernel_closed_form(const PolynomialNoise& g, double cutoff,
                               double z) {
  // K(z) = (1/pi) Int_0^c cos(uz) (1 + gamma^2 u^2)^{sigma/2} du with
  // sigma/2 a small integer: expand the binomial and use moment integrals.
  const int p = static_cast<int>(std::round(0.5 * g.sigma));
  double ic[9], is[9];
  moment_integrals(cutoff, z, 2 * p, ic, is);
  double acc = 0.0, binom = 1.0, g2i = 1.0;
  for (int i = 0; i <= p; ++i) {
    acc += binom * g2i * ic[2 * i];
    binom *= static_cast<double>(p - i) / (i + 1.0);
    g2i *= g.gamma * g.gamma;
  }
  return acc / kPi;
}

}  // namespace

double kernel_x_eval(const KernelCF& kernel, double z, int inversion_points) {
  if (kernel.poly_src && poly_kernel_is_integer_order(*kernel.poly_src))
    return poly_kernel_closed_form(*kernel.poly_src, kernel.support_cutoff, z);
  // Generic numerical inversion (slow; test use only).
  const int m = inversion_points;
  const double c = kernel.support_cutoff;
  const double du = c / m;
  double acc = 0.5 * (kernel.cf(0.0).real() +
                      kernel.cf(c).real() * std::cos(c * z));
  for (int j = 1; j < m; ++j) {
    double u = j * du;
    acc += kernel.cf(u).real() * std::cos(u * z);
  }
  return acc * du / kPi;
}

double quad_stat_xdomain_oracle(std::span<const double> y,
                                const KernelCF& kernel, const DensitySpec& f0,
                                const XDomainGrid& xgrid) {
  xgrid.validate();
  const std::size_t n = y.size();
  if (n < 2) throw ParamError("xdomain oracle: need n >= 2");
  if (n > 20)
    throw ParamError("xdomain oracle: refuses n > 20 (O(n^2 |xgrid|) cost)");

  const auto ys = sorted_copy(y);
  const double X = xgrid.x_max;
  const auto npts = static_cast<std::size_t>(std::floor(2.0 * X / xgrid.dx)) + 1;
  const double dx = 2.0 * X / static_cast<double>(npts - 1);

  // Pointwise values K(x_i - Y_k) - f0(x_i), one row per observation.
  std::vector<std::vector<double>> rows(n, std::vector<double>(npts));
  for (std::size_t i = 0; i < npts; ++i) {
    double x = -X + static_cast<double>(i) * dx;
    double f0x = f0.pdf ? f0.pdf(x) : 0.0;
    for (std::size_t k = 0; k < n; ++k)
      rows[k][i] =
          kernel_x_eval(kernel, x - ys[k], xgrid.inversion_points) - f0x;
  }

  const double kc = std::abs(kernel.cf(kernel.support_cutoff));
  const double c = kernel.support_cutoff;
  auto tail_int = [X](double a, double b) {
    // Int_X^inf dx / ((x-a)(x-b))
    if (std::abs(a - b) < 1e-12) return 1.0 / (X - a);
    return std::log((X - b) / (X - a)) / (a - b);
  };

  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t j = k + 1; j < n; ++j) {
      double pair = 0.0;
      for (std::size_t i = 0; i < npts; ++i) {
        double w = (i == 0 || i + 1 == npts) ? 0.5 : 1.0;
        pair += w * rows[k][i] * rows[j][i];
      }
      pair *= dx;
      // Beyond |x| = X the kernels reduce to their sinc-tail leading term
      // (kc/pi) sin(c(x - Y))/(x - Y); the non-oscillating part of the
      // product integrates in closed form.
      pair += kc * kc / (2.0 * kPi * kPi) * std::cos(c * (ys[k] - ys[j])) *
              (tail_int(ys[k], ys[j]) + tail_int(-ys[k], -ys[j]));
      acc += pair;
    }
  return 2.0 / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)) * acc;
}

}  // namespace deconv
