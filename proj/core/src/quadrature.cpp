#include "deconv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace deconv {

cx ecf(std::span<const double> y, double u) {
  if (y.empty()) throw ParamError("ecf: empty sample");
  // Sorted accumulation makes the value exactly permutation invariant.
  std::vector<double> ys(y.begin(), y.end());
  std::sort(ys.begin(), ys.end());
  cx acc(0.0, 0.0);
  for (double v : ys) acc += std::exp(cx(0.0, -u * v));
  return acc / static_cast<double>(ys.size());
}

void ecf_sum_on_grid(std::span<const double> y, double u0, double du,
                     std::size_t count, cx* out) {
  std::fill(out, out + count, cx(0.0, 0.0));
  // One rotation per (sample point, node): out[k] += e^{-i(u0 + k du) v}.
  // Spelled out in raw doubles (std::complex multiplication carries Annex-G
  // checking) and split into four independent rotation chains, since a
  // single chain is latency-bound on the multiply recurrence.
  auto* o = reinterpret_cast<double*>(out);
  for (double v : y) {
    double re[4], im[4];
    for (std::size_t j = 0; j < 4; ++j) {
      const double phase = (u0 + static_cast<double>(j) * du) * v;
      re[j] = std::cos(phase);
      im[j] = -std::sin(phase);
    }
    const double s4re = std::cos(4.0 * du * v), s4im = -std::sin(4.0 * du * v);
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
      for (std::size_t j = 0; j < 4; ++j) {
        o[2 * (k + j)] += re[j];
        o[2 * (k + j) + 1] += im[j];
        const double nre = re[j] * s4re - im[j] * s4im;
        im[j] = re[j] * s4im + im[j] * s4re;
        re[j] = nre;
      }
    }
    for (; k < count; ++k) {
      const std::size_t j = k & 3;
      o[2 * k] += re[j];
      o[2 * k + 1] += im[j];
    }
  }
}

namespace {

// Trapezoid with the Euler-Maclaurin endpoint correction
//   Int ~ T - h^2/12 (f'(b) - f'(a)),
// slopes taken from 4-point one-sided differences of the sampled values.
// Same nodes and weights as the plain rule, one order more accuracy at the
// boundary, which is where the rule's error lives for smooth integrands.
template <typename T>
T corrected_trapezoid(const std::vector<T>& f, double h) {
  const std::size_t m = f.size() - 1;
  T acc = 0.5 * (f[0] + f[m]);
  for (std::size_t k = 1; k < m; ++k) acc += f[k];
  acc *= h;
  if (m >= 4) {
    T da = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
    T db = (11.0 * f[m] - 18.0 * f[m - 1] + 9.0 * f[m - 2] - 2.0 * f[m - 3]) /
           (6.0 * h);
    acc -= h * h / 12.0 * (db - da);
  }
  return acc;
}

}  // namespace

cx parseval_inner(const CfFn& a, const CfFn& b, const QuadratureSpec& quad) {
  quad.validate();
  const int m = quad.m_points;
  const double du = 2.0 * quad.u_max / m;
  std::vector<cx> vals(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    double u = -quad.u_max + k * du;
    vals[static_cast<std::size_t>(k)] = a(u) * std::conj(b(u));
  }
  return corrected_trapezoid(vals, du) / kTwoPi;
}

TailEnergyResult tail_energy(const CfFn& cf, double cutoff,
                             const QuadratureSpec& quad,
                             const std::optional<TailEnvelope>& env) {
  quad.validate();
  if (!(cutoff >= 0.0)) throw ParamError("tail_energy: cutoff must be >= 0");
  if (!(quad.u_max > cutoff))
    throw ParamError("tail_energy: u_max must exceed the cutoff");
  // |cf|^2 of a Hermitian cf is even; integrate one side and double.
  const int m = quad.m_points;
  const double du = (quad.u_max - cutoff) / m;
  std::vector<double> vals(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k)
    vals[static_cast<std::size_t>(k)] = std::norm(cf(cutoff + k * du));
  TailEnergyResult r;
  r.value = 2.0 * corrected_trapezoid(vals, du) / kTwoPi;
  if (env) r.remainder_bound = env->energy_tail_bound(quad.u_max);
  return r;
}

double class_membership_integral(const DensitySpec& f, const SmoothnessClass& c,
                                 const QuadratureSpec& quad) {
  quad.validate();
  c.validate();
  auto integrand = [&](double u) {
    double au = std::abs(u);
    double sq = std::norm(f.cf(u));
    if (sq == 0.0) return 0.0;  // CF underflow wins against any weight
    double w = (c.beta > 0.0) ? std::pow(au, 2.0 * c.beta) : 1.0;
    double e = (c.alpha > 0.0 && c.r > 0.0)
                   ? std::exp(2.0 * c.alpha * std::pow(au, c.r))
                   : 1.0;
    return sq * w * e;
  };
  const int m = quad.m_points;
  const double du = quad.u_max / m;  // one-sided grid, integrand is even
  std::vector<double> vals(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) vals[static_cast<std::size_t>(k)] = integrand(k * du);
  // Decay check near the truncation edge: compare the last 5% of the range
  // against the preceding 5%; growth there means the weighted integrand
  // diverges and the truncated value is meaningless.
  double edge = 0.0, before = 0.0;
  const int tail_lo = static_cast<int>(0.95 * m);
  const int tail_mid = static_cast<int>(0.90 * m);
  for (int k = tail_lo; k <= m; ++k) edge += vals[static_cast<std::size_t>(k)];
  for (int k = tail_mid; k < tail_lo; ++k) before += vals[static_cast<std::size_t>(k)];
  double total = 0.0;
  for (double v : vals) total += v;
  if (!std::isfinite(total) || (edge > before && edge > 1e-12 * total))
    throw NumericError(
        "class_membership_integral: integrand grows at the truncation edge; "
        "the class integral diverges for these (alpha, r, beta)");
  return 2.0 * corrected_trapezoid(vals, du) / kTwoPi;
}

}  // namespace deconv
