#include "deconv/rng.hpp"

#include "deconv/common.hpp"

#include <cmath>

namespace deconv {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  // Mix (seed, stream) into one engine seed; distinct streams decorrelate.
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  eng_.seed(a ^ (b << 1));
}

double RngStream::uniform01() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = kTwoPi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RngStream::exponential() { return -std::log(uniform01()); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw ParamError("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back.
    double g = gamma(shape + 1.0);
    return g * std::pow(uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

long long min_n_satisfying(const std::function<bool(long long)>& pred,
                           long long n_cap) {
  long long lo = 16;
  if (pred(lo)) return lo;
  long long hi = lo;
  while (hi < n_cap && !pred(hi)) hi *= 2;
  if (hi >= n_cap) return n_cap;
  // pred(hi) true, pred(lo) false on the doubling path; bisect.
  lo = hi / 2;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace deconv
