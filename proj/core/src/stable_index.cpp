#include "deconv/stable_index.hpp"

#include "deconv/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace deconv {

std::string to_string(DnRecipe r) {
  switch (r) {
    case DnRecipe::base: return "base";
    case DnRecipe::density: return "density";
    case DnRecipe::functional: return "functional";
    case DnRecipe::test: return "test";
  }
  return "?";
}

void StableIndexParams::validate() const {
  if (!(s_lo > 0.0 && s_lo < s_hi && s_hi <= 2.0))
    throw ParamError("StableIndexParams: need 0 < s_lo < s_hi <= 2");
  if (!(A > 0.0)) throw ParamError("StableIndexParams: A must be positive");
  if (!(beta_prime > 0.0))
    throw ParamError("StableIndexParams: beta_prime must be positive");
  if (a != 0.0) {
    if (!(a > 1.0)) throw ParamError("StableIndexParams: a must exceed 1");
    if ((d_recipe == DnRecipe::density || d_recipe == DnRecipe::functional) &&
        !(a > s_hi / s_lo))
      throw ParamError(
          "StableIndexParams: the density/functional recipes require a > s_hi/s_lo");
  }
  if ((d_recipe != DnRecipe::base) && !(beta_bar > 0.0))
    throw ParamError("StableIndexParams: beta_bar must be positive");
}

double StableIndexParams::resolved_a() const {
  if (a != 0.0) return a;
  if (d_recipe == DnRecipe::density || d_recipe == DnRecipe::functional)
    return s_hi / s_lo + 0.5;
  return 1.5;
}

double frequency_u_n(long long n, const StableIndexParams& sip) {
  sip.validate();
  if (n < 16) throw NTooSmallError("frequency_u_n: n must be at least 16", 16);
  const double aa = sip.resolved_a();
  const double coef = (2.0 * sip.beta_prime + aa * sip.s_hi) / (2.0 * sip.s_hi);
  auto bracket = [&](long long m) {
    double lm = std::log(static_cast<double>(m));
    return 0.5 * lm - coef * std::log(lm);
  };
  const double b = bracket(n);
  if (!(b > 0.0)) {
    long long min_n =
        min_n_satisfying([&](long long m) { return bracket(m) > 0.0; });
    std::ostringstream os;
    os << "frequency_u_n: bracket not positive at n=" << n
       << "; smallest admissible n is about " << min_n;
    throw NTooSmallError(os.str(), min_n);
  }
  return std::pow(b, 1.0 / sip.s_hi);
}

SGrid build_s_grid(long long n, const StableIndexParams& sip) {
  sip.validate();
  if (n < 16) throw NTooSmallError("build_s_grid: n must be at least 16", 16);
  const double ln = std::log(static_cast<double>(n));
  const double lln = std::log(ln);
  const double base = sip.s_hi / (ln * lln);
  double d = base;
  switch (sip.d_recipe) {
    case DnRecipe::base:
      break;
    case DnRecipe::density:
      d = std::min(std::pow(ln, -(sip.beta_bar - 0.5) / sip.s_lo), base);
      break;
    case DnRecipe::functional:
      d = std::min(std::pow(ln, -2.0 * sip.beta_bar / sip.s_lo), base);
      break;
    case DnRecipe::test:
      d = std::min(std::pow(ln, -sip.beta_bar / sip.s_lo), base);
      break;
  }
  SGrid g;
  g.d_raw = d;
  const double span = sip.s_hi - sip.s_lo;
  auto steps = static_cast<std::size_t>(std::ceil(span / d));
  if (steps < 1) steps = 1;
  g.step = span / static_cast<double>(steps);
  g.s.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    g.s[k] = sip.s_lo + span * (static_cast<double>(k) / static_cast<double>(steps));
  g.s.front() = sip.s_lo;
  g.s.back() = sip.s_hi;
  return g;
}

int classify_pipe(double ecf_mod, double u, std::span<const double> s_grid,
                  double beta_prime, double A) {
  if (!(u > 0.0)) throw ParamError("classify_pipe: u must be positive");
  if (!(ecf_mod >= 0.0 && ecf_mod <= 1.0 + 1e-12))
    throw ParamError("classify_pipe: ECF modulus must lie in [0,1]");
  const auto N = s_grid.size();
  if (N < 2) throw ParamError("classify_pipe: grid needs at least 2 points");
  const double q = A * std::pow(u, -beta_prime);
  if (!(q <= 1.0))
    throw NumericError(
        "classify_pipe: q(u) > 1, frequency below the pipe ordering threshold");
  auto phi = [&](std::size_t k) {  // e^{-u^{s_k}}, 0-based index
    return std::exp(-std::pow(u, s_grid[k]));
  };
  // Branch midpoints m_k = (q Phi^[k] + Phi^[k+1])/2 must decrease in k for
  // the three-branch rule to partition [0,1]; this is the estimator's
  // well-definedness condition at u.
  std::vector<double> mid(N - 1);
  for (std::size_t k = 0; k + 1 < N; ++k)
    mid[k] = 0.5 * (q * phi(k) + phi(k + 1));
  for (std::size_t k = 1; k < mid.size(); ++k)
    if (!(mid[k] < mid[k - 1]))
      throw NumericError(
          "classify_pipe: midpoint sequence not strictly decreasing at u; "
          "frequency below the ordering threshold");
  if (ecf_mod >= mid.front()) return 1;
  if (ecf_mod < mid.back()) return static_cast<int>(N);
  // unique k in 2..N-1 with mid[k-1] <= mod < mid[k-2]
  for (std::size_t k = 1; k + 1 < N; ++k)
    if (mid[k] <= ecf_mod && ecf_mod < mid[k - 1]) return static_cast<int>(k + 1);
  throw NumericError("classify_pipe: no branch matched (unreachable)");
}

namespace {

SIndexEstimate estimate_common(const std::function<double(double)>& mod_at,
                               long long n, const StableIndexParams& sip) {
  SIndexEstimate est;
  est.u_n = frequency_u_n(n, sip);
  SGrid grid = build_s_grid(n, sip);
  est.d_raw = grid.d_raw;
  est.step = grid.step;
  est.grid = std::move(grid.s);
  // Grid-consistency condition d * u^{s_hi} * log u <= 1 (only binding for
  // u > 1, where the classifier operates).
  double lu = std::log(est.u_n);
  if (lu > 0.0 && est.step * std::pow(est.u_n, sip.s_hi) * lu > 1.0)
    throw NumericError(
        "estimate_s: grid step violates d * u_n^{s_hi} * log(u_n) <= 1");
  est.ecf_mod = mod_at(est.u_n);
  if (est.ecf_mod > 1.0) est.ecf_mod = 1.0;  // ECF modulus, clip rounding
  est.branch =
      classify_pipe(est.ecf_mod, est.u_n, est.grid, sip.beta_prime, sip.A);
  est.s_hat = est.grid[static_cast<std::size_t>(est.branch - 1)];
  return est;
}

}  // namespace

SIndexEstimate estimate_s(std::span<const double> y,
                          const StableIndexParams& sip) {
  if (y.size() < 2) throw ParamError("estimate_s: need n >= 2");
  return estimate_common(
      [&y](double u) { return std::abs(ecf(y, u)); },
      static_cast<long long>(y.size()), sip);
}

SIndexEstimate estimate_s_oracle(const std::function<double(double)>& cf_mod,
                                 long long n, const StableIndexParams& sip) {
  return estimate_common(cf_mod, n, sip);
}

double s_tilde(double s_true, std::span<const double> s_grid) {
  if (s_grid.size() < 2) throw ParamError("s_tilde: grid needs >= 2 points");
  if (!(s_true >= s_grid.front() && s_true <= s_grid.back()))
    throw ParamError("s_tilde: s outside the grid range");
  for (std::size_t k = s_grid.size() - 1; k > 0; --k)
    if (s_grid[k] <= s_true) return s_grid[k];
  return s_grid.front();
}

}  // namespace deconv
