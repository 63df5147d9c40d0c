#include "deconv/ustat.hpp"

#include "deconv/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace deconv {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Decomposition ustat_decompose(std::span<const double> y, const PairFn& H,
                              double v_n, double delta, const DrawFn& fresh,
                              int inner_mc, RngStream& rng) {
  const std::size_t n = y.size();
  if (n < 2) throw ParamError("ustat_decompose: need n >= 2");
  if (!(v_n > 0.0)) throw ParamError("ustat_decompose: v_n must be positive");
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("ustat_decompose: delta must lie in (0,1]");

  Decomposition d;
  d.v_n = v_n;
  d.v_n2 = v_n * v_n;
  d.delta = delta;
  d.z.resize(n - 1);

  double u_acc = 0.0;
  double z_acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < i; ++j) row += H(y[i], y[j]);
    u_acc += row;
    d.z[i - 1] = row / v_n;
    z_acc += d.z[i - 1];
  }
  d.u_n_value = u_acc;
  d.identity_residual =
      std::abs(v_n * z_acc - u_acc) / std::max(std::abs(u_acc), v_n);

  if (inner_mc > 0) {
    double vn2_acc = 0.0;
    double moment_acc = 0.0;
    const double p = 2.0 + 2.0 * delta;
    for (std::size_t i = 1; i < n; ++i) {
      double cond_sq = 0.0, cond_p = 0.0;
      for (int t = 0; t < inner_mc; ++t) {
        double ystar = fresh(rng);
        double row = 0.0;
        for (std::size_t j = 0; j < i; ++j) row += H(ystar, y[j]);
        double zi = row / v_n;
        cond_sq += zi * zi;
        cond_p += std::pow(std::abs(zi), p);
      }
      vn2_acc += cond_sq / inner_mc;
      moment_acc += cond_p / inner_mc;
    }
    d.V_n2 = vn2_acc;
    d.L_n = moment_acc + std::pow(std::abs(d.V_n2 - 1.0), 1.0 + delta);
  }
  return d;
}

double berry_esseen_bound(double L_n, double delta, double eps, double x,
                          double v_n, double C) {
  if (!(eps > 0.0 && eps < 0.5))
    throw ParamError("berry_esseen_bound: eps must lie in (0, 1/2)");
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("berry_esseen_bound: delta must lie in (0,1]");
  if (!(v_n > 0.0)) throw ParamError("berry_esseen_bound: v_n must be positive");
  return 16.0 * std::sqrt(eps) * std::exp(-x * x / (4.0 * v_n * v_n)) +
         C / std::pow(eps, 1.0 + delta) * L_n;
}

double ks_distance_to_normal(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double cdf = normal_cdf(v[i]);
    double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    double lo = cdf - static_cast<double>(i) / n;
    ks = std::max({ks, hi, lo});
  }
  return ks;
}

std::vector<CdfDiscrepancyRow> cdf_discrepancy_experiment(
    const StatBuilder& builder, const DrawFn& sampler,
    std::span<const long long> n_list, int reps, std::uint64_t seed,
    int threads) {
  if (reps < 1000)
    throw ParamError("cdf_discrepancy_experiment: need reps >= 1000");
  std::vector<CdfDiscrepancyRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const long long n = n_list[ni];
    auto stat = builder(n);
    std::vector<double> u(static_cast<std::size_t>(reps));
    parallel_replicates(
        u.size(), threads, [&](std::size_t rep) {
          // Sub-stream indexed by (n index, replicate) for independence
          // across both loops.
          RngStream rng(seed, ni * 1000003ULL + rep);
          std::vector<double> y(static_cast<std::size_t>(n));
          for (auto& v : y) v = sampler(rng);
          u[rep] = stat(y);
        });
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    double var = 0.0;
    for (double v : u) var += (v - mean) * (v - mean);
    var /= static_cast<double>(u.size() - 1);
    const double v_hat = std::sqrt(var);
    std::vector<double> norm(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) norm[i] = u[i] / v_hat;
    rows.push_back({n, ks_distance_to_normal(norm), v_hat});
  }
  return rows;
}

}  // namespace deconv
