#include <catch2/catch_amalgamated.hpp>

#include "deconv/ustat.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace deconv;
using Catch::Approx;

TEST_CASE("decomposition basics") {
  RngStream rng(401, 0);
  std::vector<double> y(40);
  for (auto& v : y) v = rng.normal();
  auto fresh = [](RngStream& r) { return r.normal(); };

  SECTION("H = 0 gives a zero statistic and zero increments") {
    auto d = ustat_decompose(y, [](double, double) { return 0.0; }, 1.0, 1.0,
                             fresh, 0, rng);
    CHECK(d.u_n_value == 0.0);
    for (double z : d.z) CHECK(z == 0.0);
  }
  SECTION("H(x,y) = xy matches ((sum Y)^2 - sum Y^2)/2") {
    double sum = 0.0, sq = 0.0;
    for (double v : y) {
      sum += v;
      sq += v * v;
    }
    auto d = ustat_decompose(y, [](double a, double b) { return a * b; }, 1.0,
                             1.0, fresh, 0, rng);
    CHECK(d.u_n_value == Approx(0.5 * (sum * sum - sq)).epsilon(1e-12));
  }
  SECTION("martingale identity v_n sum Z_i = U_n on random kernels") {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> yy(5 + (rng.next_u64() % 60));
      for (auto& v : yy) v = rng.uniform(-3.0, 3.0);
      double w = rng.uniform(0.2, 5.0);
      auto d = ustat_decompose(
          yy,
          [w](double a, double b) { return std::sin(w * a) * std::sin(w * b) - 0.1 * a * b; },
          rng.uniform(0.5, 2.0), 1.0, fresh, 0, rng);
      CHECK(d.identity_residual <= 1e-12);
      CHECK(d.z.size() == yy.size() - 1);
    }
  }
  SECTION("input validation") {
    std::vector<double> one{1.0};
    auto H = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(ustat_decompose(one, H, 1.0, 1.0, fresh, 0, rng), ParamError);
    CHECK_THROWS_AS(ustat_decompose(y, H, 0.0, 1.0, fresh, 0, rng), ParamError);
    CHECK_THROWS_AS(ustat_decompose(y, H, 1.0, 1.5, fresh, 0, rng), ParamError);
  }
}

TEST_CASE("conditional variance estimate centers on 1 with the true v_n") {
  // H(x,y) = xy on standard normals: v_n^2 = E U_n^2 = n(n-1)/2.
  const std::size_t n = 30;
  const double v_n = std::sqrt(n * (n - 1) / 2.0);
  auto fresh = [](RngStream& r) { return r.normal(); };
  const int reps = 300;
  std::vector<double> vn2(reps);
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng(421, static_cast<std::uint64_t>(rep));
    std::vector<double> y(n);
    for (auto& v : y) v = rng.normal();
    auto d = ustat_decompose(y, [](double a, double b) { return a * b; }, v_n,
                             1.0, fresh, 100, rng);
    vn2[rep] = d.V_n2;
  }
  double m = testsupport::mean(vn2);
  double se = std::sqrt(testsupport::variance(vn2) / reps);
  CHECK(std::abs(m - 1.0) <= 3.0 * se);
}

TEST_CASE("berry-esseen bound") {
  SECTION("x=0, eps=1/4, L_n=0 gives exactly 8") {
    CHECK(berry_esseen_bound(0.0, 1.0, 0.25, 0.0, 1.0) == Approx(8.0));
  }
  SECTION("nonincreasing in |x|") {
    double prev = 1e18;
    for (double x : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      double b = berry_esseen_bound(0.1, 1.0, 0.25, x, 1.0);
      CHECK(b <= prev);
      prev = b;
    }
  }
  SECTION("second term is linear in L_n") {
    double b1 = berry_esseen_bound(0.2, 1.0, 0.25, 3.0, 1.0);
    double b2 = berry_esseen_bound(0.4, 1.0, 0.25, 3.0, 1.0);
    double base = berry_esseen_bound(0.0, 1.0, 0.25, 3.0, 1.0);
    CHECK(b2 - base == Approx(2.0 * (b1 - base)).epsilon(1e-12));
  }
  SECTION("eps domain") {
    CHECK_THROWS_AS(berry_esseen_bound(0.1, 1.0, 0.5, 0.0, 1.0), ParamError);
    CHECK_THROWS_AS(berry_esseen_bound(0.1, 1.0, 0.0, 0.0, 1.0), ParamError);
  }
}

TEST_CASE("ks distance") {
  SECTION("standard normal sample has small distance") {
    RngStream rng(431, 0);
    std::vector<double> v(20000);
    for (auto& x : v) x = rng.normal();
    CHECK(ks_distance_to_normal(v) < 0.015);
  }
  SECTION("shifted sample has large distance") {
    RngStream rng(433, 0);
    std::vector<double> v(2000);
    for (auto& x : v) x = rng.normal() + 2.0;
    CHECK(ks_distance_to_normal(v) > 0.5);
  }
}

TEST_CASE("cdf discrepancy experiment is seed-deterministic") {
  auto fresh = [](RngStream& r) { return r.normal(); };
  auto builder = [](long long) {
    return [](std::span<const double> y) {
      double sum = 0.0, sq = 0.0;
      for (double v : y) {
        sum += v;
        sq += v * v;
      }
      return 0.5 * (sum * sum - sq);
    };
  };
  std::vector<long long> ns{50, 100};
  auto a = cdf_discrepancy_experiment(builder, fresh, ns, 1000, 555, 1);
  auto b = cdf_discrepancy_experiment(builder, fresh, ns, 1000, 555, 1);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ks == b[i].ks);
    CHECK(a[i].v_hat == b[i].v_hat);
  }
  CHECK_THROWS_AS(cdf_discrepancy_experiment(builder, fresh, ns, 500, 1, 1),
                  ParamError);
}

TEST_CASE("fixed product kernel stays away from normal (chi-square mixture)") {
  // U/v for H = xy converges to (chi2(1) - 1)/sqrt(2); its KS distance to
  // the normal stays above 0.1 for any n.
  auto fresh = [](RngStream& r) { return r.normal(); };
  auto builder = [](long long) {
    return [](std::span<const double> y) {
      double sum = 0.0, sq = 0.0;
      for (double v : y) {
        sum += v;
        sq += v * v;
      }
      return 0.5 * (sum * sum - sq);
    };
  };
  std::vector<long long> ns{400};
  auto rows = cdf_discrepancy_experiment(builder, fresh, ns, 2000, 557, 1);
  CHECK(rows[0].ks > 0.1);
}
