#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "upwind/heat_kernel.hpp"
#include "upwind/numerics.hpp"
#include "upwind/profile.hpp"

namespace upwind {

/// Number of kernel terms that certifies a < 1e-14 truncation tail for the
/// constant-speed superpositions below.
inline long phi_terms(double sigma, double y) {
  return static_cast<long>(std::ceil(4.0 * std::abs(y) / sigma + 100.0));
}

/// Phi(y) = sum_{n>=1} G(n, y + sigma n): time-0 profile of unit point
/// sources moving at exact speed sigma.  Tends to 1/sigma as y -> -inf.
inline double phi_profile(double sigma, double y, long n_max = 0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("phi_profile: sigma must be positive");
  if (n_max <= 0) n_max = phi_terms(sigma, y);
  long double s = 0.0L;
  for (long n = 1; n <= n_max; ++n) s += heat_kernel(static_cast<double>(n), y + sigma * n);
  return static_cast<double>(s);
}

/// Psi(y) = sum_{n>=1} G(n, y + floor(sigma n)): sources snapped to the grid.
/// Coincides with Phi for integer sigma.
inline double psi_profile(double sigma, double y, long n_max = 0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("psi_profile: sigma must be positive");
  if (n_max <= 0) n_max = phi_terms(sigma, y);
  long double s = 0.0L;
  for (long n = 1; n <= n_max; ++n)
    s += heat_kernel(static_cast<double>(n), y + std::floor(sigma * n));
  return static_cast<double>(s);
}

/// log |Phi(y) - 1/sigma|, evaluated in MPFR.  The deficit decays like
/// e^{-c(sigma)|y|}, far below double precision already for |y| > 30, so the
/// summation runs at a precision adapted to the expected magnitude.
inline double phi_deficit_log(double sigma, double y) {
  const double expected_exp = 1.9 * std::abs(y) + 120.0;  // generous bound
  const auto prec = static_cast<mpfr_prec_t>(expected_exp * 1.4427 + 128.0);
  mpfr_t sum, term, arg, tmp;
  mpfr_inits2(prec, sum, term, arg, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(sum, 1);
  const double t0 = std::abs(y) / sigma;
  long n = 1;
  for (;;) {
    // term = exp(-(y + sigma n)^2 / 4n) / (2 sqrt(pi n))
    mpfr_set_d(arg, y, MPFR_RNDN);
    mpfr_set_d(tmp, sigma, MPFR_RNDN);
    mpfr_mul_si(tmp, tmp, n, MPFR_RNDN);
    mpfr_add(arg, arg, tmp, MPFR_RNDN);
    mpfr_sqr(arg, arg, MPFR_RNDN);
    mpfr_div_si(arg, arg, -4 * n, MPFR_RNDN);
    mpfr_exp(term, arg, MPFR_RNDN);
    mpfr_const_pi(tmp, MPFR_RNDN);
    mpfr_mul_si(tmp, tmp, n, MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_mul_ui(tmp, tmp, 2, MPFR_RNDN);
    mpfr_div(term, term, tmp, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    // stop once past the bump and the term exponent is below the target
    if (n > static_cast<long>(t0) + 10) {
      const double le = mpfr_get_d(arg, MPFR_RNDN);  // log of the gaussian factor
      if (le < -expected_exp - 40.0) break;
    }
    ++n;
    if (n > 100000000L) break;
  }
  mpfr_set_d(tmp, sigma, MPFR_RNDN);       // sigma itself is an exact double
  mpfr_ui_div(tmp, 1, tmp, MPFR_RNDN);     // 1/sigma at working precision
  mpfr_sub(sum, sum, tmp, MPFR_RNDN);
  mpfr_abs(sum, sum, MPFR_RNDN);
  double out;
  if (mpfr_zero_p(sum)) {
    out = -std::numeric_limits<double>::infinity();
  } else {
    mpfr_log(sum, sum, MPFR_RNDN);
    out = mpfr_get_d(sum, MPFR_RNDN);
  }
  mpfr_clears(sum, term, arg, tmp, static_cast<mpfr_ptr>(nullptr));
  return out;
}

/// Total variation of the grid-sampled Psi^{(1+eps)} over
/// I_eps = [-eps^-2, -eps^-2/2].  Warns on stderr when the interval size
/// eps^-2 exceeds the sample budget.
inline double resonance_tv(double eps, long* n_samples = nullptr,
                           double sample_budget = 1e6) {
  if (!(eps > 0.0 && eps <= 0.2))
    throw std::invalid_argument("resonance_tv: eps must lie in (0, 0.2]");
  if (1.0 / (eps * eps) > sample_budget)
    std::fprintf(stderr, "resonance_tv: eps^-2 = %g exceeds the sample budget %g\n",
                 1.0 / (eps * eps), sample_budget);
  const double sigma = 1.0 + eps;
  const long y_lo = static_cast<long>(-std::ceil(1.0 / (eps * eps)));
  const long y_hi = y_lo / 2;
  Profile prof;
  prof.j_min = y_lo;
  prof.values.reserve(static_cast<std::size_t>(y_hi - y_lo + 1));
  for (long y = y_lo; y <= y_hi; ++y)
    prof.values.push_back(psi_profile(sigma, static_cast<double>(y)));
  if (n_samples) *n_samples = y_hi - y_lo + 1;
  return tv(prof, y_lo, y_hi);
}

/// Same interval, but for the smooth-source profile Phi.
inline double resonance_tv_phi(double eps) {
  if (!(eps > 0.0 && eps <= 0.2))
    throw std::invalid_argument("resonance_tv_phi: eps must lie in (0, 0.2]");
  const double sigma = 1.0 + eps;
  const long y_lo = static_cast<long>(-std::ceil(1.0 / (eps * eps)));
  const long y_hi = y_lo / 2;
  Profile prof;
  prof.j_min = y_lo;
  for (long y = y_lo; y <= y_hi; ++y)
    prof.values.push_back(phi_profile(sigma, static_cast<double>(y)));
  return tv(prof, y_lo, y_hi);
}

// ---------------------------------------------------------------------------
// Variable-speed source run
// ---------------------------------------------------------------------------

/// v(T,y) = sum_{n=1}^{T - ceil(sqrt T)} G(T-n, y - floor(gamma_src(n)))
/// with gamma_src(n) = (n - T) - 2 sqrt(T - n): the heat-equation profile at
/// time T left behind by grid-snapped sources on an accelerating path.
/// Terms outside a certified window (tails < 1e-14 relative) are skipped.
/// Kernels are evaluated in long double: the downstream oscillation sits
/// many orders below the profile itself and double roundoff would swamp it.
inline long double variable_source_profile_l(long T, double y) {
  if (T < 1) throw std::invalid_argument("variable_source_profile: T must be >= 1");
  const long n_hi = T - static_cast<long>(std::ceil(std::sqrt(static_cast<double>(T))));
  // center of the contributing window: T - n ~ r^2 with r = -1 + sqrt(1 - y)
  const double r = -1.0 + std::sqrt(std::max(1.0 - y, 1.0));
  const long n_center = std::min(n_hi, std::max<long>(1, T - static_cast<long>(r * r)));
  long double s = 0.0L;
  auto term = [&](long n) -> long double {
    const long double tk = static_cast<long double>(T - n);
    const long double gam = (static_cast<long double>(n) - T) - 2.0L * sqrtl(tk);
    const long double x = static_cast<long double>(y) - floorl(gam);
    return expl(-x * x / (4.0L * tk)) / (2.0L * sqrtl(static_cast<long double>(M_PI) * tk));
  };
  // expand from the center until the gaussian tails are negligible
  const long double cutoff = 1e-22L;
  long double peak = 0.0L;
  for (long n = n_center; n >= 1; --n) {
    const long double v = term(n);
    s += v;
    peak = std::max(peak, v);
    if (v < cutoff * (peak > 0 ? peak : 1.0L) && n < n_center - 3) break;
  }
  for (long n = n_center + 1; n <= n_hi; ++n) {
    const long double v = term(n);
    s += v;
    peak = std::max(peak, v);
    if (v < cutoff * (peak > 0 ? peak : 1.0L) && n > n_center + 3) break;
  }
  return s;
}

inline double variable_source_profile(long T, double y) {
  return static_cast<double>(variable_source_profile_l(T, y));
}

struct DyadicRow {
  int j;
  long y_lo, y_hi;
  double tv_value;
};

/// Total variation of v(T, .) sampled on integers in each dyadic interval
/// [y_j, y_j/2], y_j = -2^j sqrt(T), j = 1..N, N = floor(log2(T)/2).
inline std::vector<DyadicRow> dyadic_tv(long T) {
  if (T < 16) throw std::invalid_argument("dyadic_tv: T must be >= 16");
  const int N = static_cast<int>(std::floor(0.5 * std::log2(static_cast<double>(T))));
  std::vector<DyadicRow> rows;
  const double sqrtT = std::sqrt(static_cast<double>(T));
  for (int j = 1; j <= N; ++j) {
    DyadicRow row;
    row.j = j;
    row.y_lo = static_cast<long>(std::llround(-std::ldexp(sqrtT, j)));
    row.y_hi = row.y_lo / 2;
    // differences taken in long double: the wake oscillation is far below
    // the O(1) profile and double rounding of the values would mask it
    long double s = 0.0L, prev = variable_source_profile_l(T, static_cast<double>(row.y_lo));
    for (long y = row.y_lo + 1; y <= row.y_hi; ++y) {
      const long double cur = variable_source_profile_l(T, static_cast<double>(y));
      s += fabsl(cur - prev);
      prev = cur;
    }
    row.tv_value = static_cast<double>(s);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace upwind
