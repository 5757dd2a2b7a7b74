#pragma once

#include <cmath>
#include <stdexcept>

namespace upwind {

/// Iterated sawtooth functions: 1-periodic, zero mean, h2' = h1.
///
///   h1(t) = floor(t) - t + 1/2          (jumps at integers, |h1| <= 1/2)
///   h2(t) = (s - s^2)/2 - 1/12,  s = t - floor(t)   (continuous, |h2| <= 1/12)
///
/// h2 is the unique continuous 1-periodic zero-mean antiderivative of h1.
inline double sawtooth(int m, double t) {
  const double s = t - std::floor(t);
  switch (m) {
    case 1: return 0.5 - s;
    case 2: return 0.5 * (s - s * s) - 1.0 / 12.0;
    default: throw std::invalid_argument("sawtooth: m must be 1 or 2");
  }
}

}  // namespace upwind
