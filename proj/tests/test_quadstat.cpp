#include <catch2/catch_amalgamated.hpp>

#include "deconv/densities.hpp"
#include "deconv/quadstat.hpp"
#include "deconv/rng.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace deconv;
using Catch::Approx;

namespace {
std::vector<double> random_sample(RngStream& rng, std::size_t n, double spread) {
  std::vector<double> y(n);
  for (auto& v : y) v = rng.uniform(-spread, spread);
  return y;
}
}  // namespace

TEST_CASE("fast path equals reference path") {
  PolynomialNoise g{2.0, 1.0};
  auto f0 = densities::gaussian(0.0, 1.0);
  QuadratureSpec quad{50.0, 2048};
  RngStream rng(101, 0);

  for (int cfgi = 0; cfgi < 100; ++cfgi) {
    const auto n = static_cast<std::size_t>(2 + (rng.next_u64() % 7));
    const double h = rng.uniform(0.3, 0.8);
    auto y = random_sample(rng, n, 5.0);
    KernelCF k = kernel_poly(h, g);
    const bool with_f0 = cfgi % 2 == 0;
    std::optional<CfFn> f0cf;
    if (with_f0) f0cf = f0.cf;
    auto fast = quad_stat(y, k, f0cf, quad, QuadStatPath::fast);
    auto ref = quad_stat(y, k, f0cf, quad, QuadStatPath::reference);
    INFO("config " << cfgi << " n=" << n << " h=" << h << " f0=" << with_f0);
    CHECK(std::abs(fast.value - ref.value) <=
          1e-9 * std::max(std::abs(ref.value), 1e-12));
    CHECK(ref.imag_residue <= 1e-9);
  }
}

TEST_CASE("statistic is exactly permutation invariant (fast path)") {
  PolynomialNoise g{2.0, 1.0};
  QuadratureSpec quad{50.0, 1024};
  RngStream rng(103, 0);
  auto y = random_sample(rng, 23, 8.0);
  KernelCF k = kernel_poly(0.4, g);
  auto f0 = densities::laplace(1.0);

  auto base = quad_stat(y, k, f0.cf, quad);
  std::vector<double> perm = y;
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 7, perm.end());
  auto permuted = quad_stat(perm, k, f0.cf, quad);
  CHECK(base.value == permuted.value);
}

TEST_CASE("two equal observations give a nonnegative squared distance") {
  PolynomialNoise g{2.0, 1.0};
  QuadratureSpec quad{50.0, 2048};
  std::vector<double> y{0.7, 0.7};
  KernelCF k = kernel_poly(0.5, g);
  auto f0 = densities::gaussian(0.0, 1.0);
  auto r = quad_stat(y, k, f0.cf, quad);
  // value = ||K_h(.-Y1) - f0||^2 for the single pair
  CHECK(r.value >= 0.0);
  CHECK(r.f0_tail > 0.0);
  CHECK(r.f0_tail < r.value);
}

TEST_CASE("quad_stat input validation") {
  PolynomialNoise g{2.0, 1.0};
  QuadratureSpec quad{50.0, 1024};
  KernelCF k = kernel_poly(0.5, g);
  std::vector<double> one{0.0};
  CHECK_THROWS_AS(quad_stat(one, k, std::nullopt, quad), ParamError);
}

TEST_CASE("centered value strips exactly the f0 tail constant") {
  PolynomialNoise g{2.0, 1.0};
  QuadratureSpec quad{50.0, 2048};
  RngStream rng(107, 0);
  auto y = random_sample(rng, 6, 4.0);
  KernelCF k = kernel_poly(0.5, g);
  auto f0 = densities::laplace(1.0);
  auto r = quad_stat(y, k, f0.cf, quad);
  auto no_f0 = quad_stat(y, k, std::nullopt, quad);
  CHECK(r.value - r.f0_tail == Approx(r.centered()));
  CHECK(no_f0.f0_tail == 0.0);
}

TEST_CASE("x-domain oracle agrees with the Fourier path") {
  PolynomialNoise g{2.0, 1.0};
  auto f0 = densities::gaussian(0.0, 1.0);
  QuadratureSpec quad{50.0, 8192};
  RngStream rng(109, 0);
  XDomainGrid xg;
  xg.x_max = 2000.0;
  xg.dx = 0.05;

  for (int trial = 0; trial < 3; ++trial) {
    auto y = random_sample(rng, 5, 3.0);
    const double h = 0.4 + 0.1 * trial;
    KernelCF k = kernel_poly(h, g);
    double fast = quad_stat(y, k, f0.cf, quad).value;
    double oracle = quad_stat_xdomain_oracle(y, k, f0, xg);
    INFO("trial " << trial << " fast=" << fast << " oracle=" << oracle);
    CHECK(std::abs(fast - oracle) <=
          1e-4 * std::max(std::abs(fast), std::abs(oracle)) + 1e-7);
  }
}

TEST_CASE("x-domain oracle refuses large n") {
  PolynomialNoise g{2.0, 1.0};
  KernelCF k = kernel_poly(0.5, g);
  auto f0 = densities::gaussian(0.0, 1.0);
  std::vector<double> y(21, 0.1);
  CHECK_THROWS_AS(quad_stat_xdomain_oracle(y, k, f0, XDomainGrid{}), ParamError);
}

TEST_CASE("kernel_x_eval closed form matches numerical inversion") {
  PolynomialNoise g{2.0, 1.0};
  KernelCF k = kernel_poly(0.5, g);
  KernelCF k_generic = k;
  k_generic.poly_src.reset();  // force the generic inversion path
  for (double z : {0.0, 0.01, 0.3, 1.0, 4.7, -2.2, 25.0}) {
    double closed = kernel_x_eval(k, z, 0);
    double numeric = kernel_x_eval(k_generic, z, 200000);
    CHECK(closed == Approx(numeric).margin(1e-6));
  }
}
