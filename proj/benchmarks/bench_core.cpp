#include <benchmark/benchmark.h>

#include "deconv/densities.hpp"
#include "deconv/quadstat.hpp"
#include "deconv/sampling.hpp"
#include "deconv/semiparam.hpp"
#include "deconv/stable_index.hpp"

using namespace deconv;

namespace {

Sample make_sample(std::size_t n) {
  RngStream rng(5, 0);
  return sample_convolution(densities::laplace(1.0),
                            NoiseSpec{PolynomialNoise{2.0, 1.0}}, n, rng);
}

void BM_EcfGrid(benchmark::State& state) {
  auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  std::vector<cx> out(2049);
  for (auto _ : state) {
    ecf_sum_on_grid(s.y, -5.0, 10.0 / 2048, out.size(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2049);
}
BENCHMARK(BM_EcfGrid)->Arg(500)->Arg(2000)->Arg(8000);

void BM_QuadStatFast(benchmark::State& state) {
  auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  PolynomialNoise g{2.0, 1.0};
  KernelCF k = kernel_poly(0.3, g);
  auto f0 = densities::laplace(1.0);
  QuadratureSpec quad{50.0, 2048};
  for (auto _ : state) {
    auto r = quad_stat(s.y, k, f0.cf, quad);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_QuadStatFast)->Arg(500)->Arg(2000)->Arg(8000);

void BM_EstimateS(benchmark::State& state) {
  RngStream rng(7, 0);
  auto s = sample_convolution(densities::laplace(1.0),
                              NoiseSpec{StableNoise{1.5}},
                              static_cast<std::size_t>(state.range(0)), rng);
  StableIndexParams sip;
  sip.s_lo = 1.0;
  sip.s_hi = 2.0;
  sip.beta_prime = 2.0;
  sip.A = 0.5;
  for (auto _ : state) {
    auto est = estimate_s(s.y, sip);
    benchmark::DoNotOptimize(est.s_hat);
  }
}
BENCHMARK(BM_EstimateS)->Arg(100000);

void BM_DensityAt(benchmark::State& state) {
  RngStream rng(9, 0);
  auto s = sample_convolution(densities::laplace(1.0),
                              NoiseSpec{StableNoise{1.0}},
                              static_cast<std::size_t>(state.range(0)), rng);
  QuadratureSpec quad{50.0, 2048};
  for (auto _ : state) {
    double v = density_at_given_s(s.y, 0.0, 1.0, 1.0, quad);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_DensityAt)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
