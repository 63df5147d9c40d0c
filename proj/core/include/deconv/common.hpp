#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace deconv {

using cx = std::complex<double>;

/// Characteristic function (Fourier transform of a density), evaluable on R.
using CfFn = std::function<cx(double)>;

/// Invalid argument / configuration. CLI maps this family to exit code 2.
class ParamError : public std::invalid_argument {
public:
  explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A formula's bracket or domain constraint fails at this sample size.
/// Carries the smallest admissible n when it can be computed.
class NTooSmallError : public ParamError {
public:
  NTooSmallError(const std::string& msg, long long min_n)
      : ParamError(msg), min_n(min_n) {}
  long long min_n;
};

/// Numerical failure (overflow guard, quadrature diagnostic, ordering
/// violation). CLI maps this family to exit code 3.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Smallest n >= 16 such that pred(n) holds, assuming pred is eventually
/// monotone true. Scans by doubling, then bisects the last gap.
long long min_n_satisfying(const std::function<bool(long long)>& pred,
                           long long n_cap = (1LL << 52));

}  // namespace deconv
