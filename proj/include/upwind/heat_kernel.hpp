#pragma once

#include <cmath>
#include <stdexcept>

namespace upwind {

/// Heat kernel G(t,x) = exp(-x^2/4t) / (2 sqrt(pi t)) and its x-derivatives,
/// in closed form.  Solves G_t = G_xx for t > 0.
///
/// deriv = 0..3 selects G, G_x, G_xx, G_xxx.
inline double heat_kernel(double t, double x, int deriv = 0) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t must be positive");
  const double g = std::exp(-x * x / (4.0 * t)) / (2.0 * std::sqrt(M_PI * t));
  switch (deriv) {
    case 0: return g;
    case 1: return g * (-x / (2.0 * t));
    case 2: return g * (x * x - 2.0 * t) / (4.0 * t * t);
    case 3: return g * x * (6.0 * t - x * x) / (8.0 * t * t * t);
    default: throw std::invalid_argument("heat_kernel: deriv must be in 0..3");
  }
}

}  // namespace upwind
