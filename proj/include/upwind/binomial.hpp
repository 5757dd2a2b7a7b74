#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "upwind/heat_kernel.hpp"

namespace upwind {

/// Exact C(n,k) in unsigned 64-bit integer arithmetic.  Valid for n <= 62
/// (C(62,31) < 2^63); intermediate products are kept in 128 bits.
inline std::uint64_t binomial_exact_u64(int n, int k) {
  if (n < 0 || n > 62) throw std::invalid_argument("binomial_exact_u64: n out of range");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i);
    c /= static_cast<unsigned>(i);  // exact: C(n-k+i, i) is an integer
  }
  return static_cast<std::uint64_t>(c);
}

/// Green kernel of the half-speed upwind step: K^n_k = 2^-n C(n,k).
/// Exact dyadic arithmetic for n <= 50, log-gamma evaluation above.
/// Returns 0 outside 0 <= k <= n.
inline double binomial_kernel(int n, int k) {
  if (n < 0) throw std::invalid_argument("binomial_kernel: n must be >= 0");
  if (k < 0 || k > n) return 0.0;
  if (n <= 50)
    return std::ldexp(static_cast<double>(binomial_exact_u64(n, k)), -n);
  const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0) - n * M_LN2;
  return std::exp(lg);
}

/// Heat-kernel model of the first difference K^n_k - K^n_{k-1}:
///
///   4 [ G_x(n/2, 2k-n) - G_xx(n/2, 2k-n) ]
///
/// Accurate to O(n^{-2+4delta}) inside the band |2k-n| <= n^{1/2+delta};
/// callers police the band.
inline double binomial_diff_approx(int n, int k) {
  if (n <= 0) throw std::invalid_argument("binomial_diff_approx: n must be > 0");
  const double t = 0.5 * n;
  const double x = 2.0 * k - n;
  return 4.0 * (heat_kernel(t, x, 1) - heat_kernel(t, x, 2));
}

// ---------------------------------------------------------------------------
// Central binomial expansion a_k(nu) = 2^{-2 nu} C(2 nu, nu + k)
// ---------------------------------------------------------------------------

/// Pieces of the normal approximation  a_k(nu) = h N(k h) exp(eps1 - eps2),
/// h = sqrt(2/nu), N the standard normal density.
///
/// eps1 collects the series expansion of the ratio a_k/a_0 beyond the
/// Gaussian; eps2 is the Stirling correction, fixed so that the
/// reconstruction is exact at k = 0 to O(nu^-4):
///   eps2(nu) = 1/(8 nu) - 1/(192 nu^3).
struct StirlingExpansion {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double h = 0.0;
  double normal_value = 0.0;

  double reconstructed() const { return h * normal_value * std::exp(eps1 - eps2); }
};

inline StirlingExpansion a_k_expansion(int nu, int k) {
  if (nu <= 0) throw std::invalid_argument("a_k_expansion: nu must be positive");
  if (std::abs(k) > nu) throw std::invalid_argument("a_k_expansion: |k| > nu, kernel is zero");
  StirlingExpansion e;
  const double r = static_cast<double>(k) / nu;
  const double kk = static_cast<double>(k);
  e.eps1 = 0.5 * r * r - r * r * r / 3.0 -
           (kk - 1.0) * (kk - 1.0) * kk * kk / (6.0 * std::pow(static_cast<double>(nu), 3)) +
           0.25 * r * r * r * r;
  e.eps2 = 1.0 / (8.0 * nu) - 1.0 / (192.0 * std::pow(static_cast<double>(nu), 3));
  e.h = std::sqrt(2.0 / nu);
  const double xh = kk * e.h;
  e.normal_value = std::exp(-0.5 * xh * xh) / std::sqrt(2.0 * M_PI);
  return e;
}

/// Exact a_k(nu) via the log-gamma kernel path.
inline double a_k_exact(int nu, int k) {
  return binomial_kernel(2 * nu, nu + k);
}

}  // namespace upwind
