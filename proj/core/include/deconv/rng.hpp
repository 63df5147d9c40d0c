#pragma once

#include <cstdint>
#include <random>

namespace deconv {

/// Seeded random stream. Replicate r of an experiment always gets
/// RngStream(seed, r), so parallel runs reproduce the sequential ones
/// bit for bit. Distribution transforms are explicit closed forms rather
/// than std:: distributions, whose algorithms the standard leaves open.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on (0,1), never returns an endpoint.
  double uniform01();
  double uniform(double a, double b);
  /// Standard normal via Box-Muller (spare cached).
  double normal();
  /// Exponential with unit mean.
  double exponential();
  /// Gamma(shape, 1), Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape);

private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace deconv
