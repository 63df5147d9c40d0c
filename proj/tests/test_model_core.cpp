#include <catch2/catch_amalgamated.hpp>

#include "deconv/densities.hpp"
#include "deconv/quadrature.hpp"
#include "deconv/sampling.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace deconv;
using Catch::Approx;

TEST_CASE("smoothness class invariants") {
  CHECK_NOTHROW((SmoothnessClass{0.0, 0.0, 1.0, 0.3}).validate());
  CHECK_NOTHROW((SmoothnessClass{0.1, 2.0, 0.0, 1.0}).validate());
  // beta = 0 with alpha = 0 has no decay control at all.
  CHECK_THROWS_AS((SmoothnessClass{0.0, 0.0, 0.0, 1.0}).validate(), ParamError);
  CHECK_THROWS_AS((SmoothnessClass{0.0, 2.0, 0.0, 1.0}).validate(), ParamError);
  CHECK_THROWS_AS((SmoothnessClass{0.1, 2.5, 0.0, 1.0}).validate(), ParamError);
  CHECK_THROWS_AS((SmoothnessClass{0.1, 2.0, 0.0, -1.0}).validate(), ParamError);
}

TEST_CASE("catalog CF identities: cf(0)=1, |cf|<=1, Hermitian") {
  auto cats = {
      densities::gaussian(0.0, 1.0),    densities::gaussian(0.7, 2.0),
      densities::cauchy(1.0),           densities::laplace(1.0),
      densities::sym_gamma(2, 1.0),     densities::sym_gamma(3, 0.5),
      densities::gaussian_mixture(0.4, -1.0, 0.5, 1.5, 0.8),
      densities::point_mass(),
  };
  RngStream rng(42);
  for (const auto& d : cats) {
    INFO(d.name);
    CHECK(std::abs(d.cf(0.0) - cx(1.0, 0.0)) < 1e-15);
    for (int i = 0; i < 1000; ++i) {
      double u = rng.uniform(-40.0, 40.0);
      cx v = d.cf(u);
      CHECK(std::abs(v) <= 1.0 + 1e-12);
      CHECK(std::abs(v - std::conj(d.cf(-u))) < 1e-12);
    }
  }
}

TEST_CASE("catalog pdf matches CF through Fourier inversion") {
  // f(x) = (1/2pi) Int e^{-iux} Phi(u) du, checked at a few x per density.
  // The truncation margin comes from each density's CF envelope.
  auto cats = {densities::laplace(1.0), densities::sym_gamma(2, 1.0),
               densities::sym_gamma(3, 1.0), densities::sym_gamma(4, 0.8),
               densities::gaussian(0.3, 1.2),
               densities::gaussian_mixture(0.5, -1.0, 0.6, 1.0, 0.6)};
  const double u_cut = 60.0;
  for (const auto& d : cats) {
    INFO(d.name);
    REQUIRE(d.cf_envelope);
    double margin = 2e-6;
    if (d.cf_envelope->kind == TailEnvelope::Kind::Polynomial) {
      margin += d.cf_envelope->c *
                std::pow(u_cut, 1.0 - d.cf_envelope->p) /
                ((d.cf_envelope->p - 1.0) * kPi);
    }
    for (double x : {-1.7, 0.0, 0.4, 2.3}) {
      auto integrand = [&](double u) {
        return (std::exp(cx(0.0, -u * x)) * d.cf(u)).real();
      };
      double inv =
          testsupport::simpson(integrand, -u_cut, u_cut, 40000) / kTwoPi;
      CHECK(inv == Approx(d.pdf(x)).margin(margin));
    }
  }
}

TEST_CASE("pipe lower bound A|u|^-beta' holds for laplace-type entries") {
  for (const auto& d : {densities::laplace(1.0), densities::sym_gamma(2, 1.0)}) {
    REQUIRE(d.has_pipe_bound());
    for (double u = *d.a_cutoff; u < 60.0; u += 0.37) {
      CHECK(std::abs(d.cf(u)) >=
            *d.lower_bound_A * std::pow(u, -*d.beta_prime) - 1e-14);
    }
  }
}

TEST_CASE("stable sampler: CF identities at s=2 and s=1") {
  RngStream rng(7, 0);
  const std::size_t n = 200000;

  SECTION("s=2 is a normal with variance 2") {
    Sample s = sample_stable(2.0, n, rng);
    double var = testsupport::variance(s.y);
    CHECK(var == Approx(2.0).epsilon(0.03));
  }
  SECTION("s=1 is standard Cauchy: quartiles at +-1") {
    Sample s = sample_stable(1.0, n, rng);
    std::sort(s.y.begin(), s.y.end());
    double q1 = s.y[n / 4], q3 = s.y[3 * n / 4];
    CHECK(q1 == Approx(-1.0).margin(0.02));
    CHECK(q3 == Approx(1.0).margin(0.02));
  }
}

TEST_CASE("stable sampler: empirical CF against exp(-|u|^1.5)") {
  RngStream rng(11, 0);
  const std::size_t n = 100000;
  Sample s = sample_stable(1.5, n, rng);
  const double tol = 3.0 / std::sqrt(static_cast<double>(n));
  for (double u : {0.5, 1.0, 2.0}) {
    cx e = ecf(s.y, u);
    CHECK(std::abs(e - cx(std::exp(-std::pow(u, 1.5)), 0.0)) < tol);
  }
}

TEST_CASE("stable sampler: KS distance to the closed-form CDFs") {
  // 99% KS band: 1.628/sqrt(n).
  RngStream rng(13, 0);
  const std::size_t n = 100000;
  const double band = 1.63 / std::sqrt(static_cast<double>(n));

  auto ks = [&](std::vector<double> v, const std::function<double(double)>& cdf) {
    std::sort(v.begin(), v.end());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double c = cdf(v[i]);
      d = std::max({d, (i + 1.0) / v.size() - c, c - static_cast<double>(i) / v.size()});
    }
    return d;
  };

  SECTION("s=2: N(0,2)") {
    Sample s = sample_stable(2.0, n, rng);
    double d = ks(s.y, [](double x) { return 0.5 * std::erfc(-x / 2.0); });
    CHECK(d < band);
  }
  SECTION("s=1: Cauchy") {
    Sample s = sample_stable(1.0, n, rng);
    double d = ks(s.y, [](double x) { return 0.5 + std::atan(x) / kPi; });
    CHECK(d < band);
  }
}

TEST_CASE("stable sampler rejects s outside (0,2]") {
  RngStream rng(1);
  CHECK_THROWS_AS(sample_stable(0.0, 10, rng), ParamError);
  CHECK_THROWS_AS(sample_stable(2.5, 10, rng), ParamError);
  CHECK_THROWS_AS(sample_stable(-1.0, 10, rng), ParamError);
}

TEST_CASE("convolution sampler") {
  SECTION("point-mass signal leaves the noise distribution") {
    RngStream r1(5, 3), r2(5, 3);
    auto f = densities::point_mass();
    NoiseSpec g{StableNoise{1.5}};
    Sample s = sample_convolution(f, g, 1000, r1);
    // Same stream, same draws: Y must equal the raw noise sequence.
    for (std::size_t i = 0; i < s.y.size(); ++i)
      CHECK(s.y[i] == g.draw(r2));
  }
  SECTION("gaussian signal + stable(2) noise has variance 3") {
    RngStream rng(17, 0);
    auto f = densities::gaussian(0.0, 1.0);
    Sample s = sample_convolution(f, NoiseSpec{StableNoise{2.0}}, 200000, rng);
    CHECK(testsupport::variance(s.y) == Approx(3.0).epsilon(0.03));
  }
  SECTION("laplace signal + laplace noise: ECF at u=1 is 1/4") {
    RngStream rng(19, 0);
    auto f = densities::laplace(1.0);
    NoiseSpec g{PolynomialNoise{2.0, 1.0}};  // (1+u^2)^{-1}
    Sample s = sample_convolution(f, g, 100000, rng);
    CHECK(std::abs(ecf(s.y, 1.0) - cx(0.25, 0.0)) <
          3.0 / std::sqrt(100000.0));
  }
  SECTION("fixed seed is bit-reproducible") {
    auto f = densities::laplace(1.0);
    NoiseSpec g{PolynomialNoise{2.0, 1.0}};
    RngStream a(23, 9), b(23, 9);
    Sample sa = sample_convolution(f, g, 500, a);
    Sample sb = sample_convolution(f, g, 500, b);
    CHECK(sa.y == sb.y);
  }
}

TEST_CASE("polynomial noise sampler matches its CF") {
  // sigma = 3 exercises the non-integer gamma shape path.
  NoiseSpec g{PolynomialNoise{3.0, 1.0}};
  RngStream rng(29, 0);
  std::vector<double> y(100000);
  for (auto& v : y) v = g.draw(rng);
  for (double u : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(ecf(y, u) - cx(g.cf_real(u), 0.0)) <
          3.0 / std::sqrt(100000.0));
  }
}

TEST_CASE("class membership integral") {
  QuadratureSpec quad{50.0, 8192};

  SECTION("gaussian in (alpha=0.1, r=2, beta=0)") {
    auto f = densities::gaussian(0.0, 1.0);
    SmoothnessClass c{0.1, 2.0, 0.0, 1.0};
    double v = class_membership_integral(f, c, quad);
    CHECK(v == Approx(0.315391565252520).epsilon(1e-6));
  }
  SECTION("laplace in (0, 0, beta=1): truncated form of the exact 1/4") {
    // Full-line value is exactly 1/4; on [-50, 50] the closed form gives
    // (atan(50) - 50/2501) / (2 pi) * 2 = 0.24363549931812825.
    auto f = densities::laplace(1.0);
    SmoothnessClass c{0.0, 0.0, 1.0, 0.26};
    double v = class_membership_integral(f, c, quad);
    CHECK(v == Approx(0.24363549931812825).epsilon(1e-9));
    CHECK(v < 0.25);
    CHECK(v <= c.L);
    CHECK(v <= f.smoothness->L);
  }
  SECTION("alpha = beta = 0 edge rejected by the class invariant") {
    auto f = densities::laplace(1.0);
    SmoothnessClass bad{0.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(class_membership_integral(f, bad, quad), ParamError);
  }
  SECTION("divergent growth at the truncation edge is diagnosed") {
    // Polynomially decaying CF against an exponential weight diverges.
    auto f = densities::laplace(1.0);
    SmoothnessClass c{1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(class_membership_integral(f, c, quad), NumericError);
  }
  SECTION("catalog classes contain their densities") {
    for (const auto& d :
         {densities::gaussian(0.0, 1.0), densities::cauchy(1.0),
          densities::laplace(1.0), densities::sym_gamma(2, 1.0),
          densities::gaussian_mixture(0.5, -1.0, 0.6, 1.0, 0.6)}) {
      INFO(d.name);
      REQUIRE(d.smoothness);
      double v = class_membership_integral(d, *d.smoothness, quad);
      CHECK(v <= d.smoothness->L);
    }
  }
}

TEST_CASE("sample round trip through text files") {
  RngStream rng(31, 0);
  Sample s = sample_convolution(densities::laplace(1.0),
                                NoiseSpec{StableNoise{1.0}}, 257, rng);
  s.seed = 31;
  auto path = std::string("roundtrip_sample.txt");
  write_sample(s, path);
  Sample back = read_sample(path);
  REQUIRE(back.y.size() == s.y.size());
  CHECK(back.y == s.y);
  CHECK(back.seed == 31);
  CHECK(back.signal_name == s.signal_name);
  std::remove(path.c_str());
  std::remove((path + ".meta.json").c_str());
}

TEST_CASE("density parser") {
  CHECK(densities::parse("laplace(1)").name == "laplace(1)");
  CHECK(densities::parse("gaussian(0,1)").name == "gaussian(0,1)");
  CHECK_THROWS_AS(densities::parse("laplace(1,2)"), ParamError);
  CHECK_THROWS_AS(densities::parse("nope(1)"), ParamError);
  CHECK_THROWS_AS(densities::parse("laplace(x)"), ParamError);
}
