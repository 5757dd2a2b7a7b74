#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace upwind {

/// Parameters of the system: flux f(u) = ln(nu + mu e^u) for the first
/// component, advection speed lambda = 1/2 for the second, and the rational
/// reference speed lambda0 = p/q of the shock construction.
///
/// Invariants: nu = 1 - mu, 0 < lambda < mu < lambda0 < 1, gcd(p,q) = 1.
struct FluxParams {
  double mu;
  double nu;
  double lambda;  // fixed 1/2 throughout
  int lambda0_p;
  int lambda0_q;

  double lambda0() const { return static_cast<double>(lambda0_p) / lambda0_q; }
  double beta() const { return lambda0() - lambda; }

  static FluxParams make(double mu, int p, int q) {
    FluxParams fp{mu, 1.0 - mu, 0.5, p, q};
    std::vector<std::string> bad = fp.violations();
    if (!bad.empty()) {
      std::string msg = "FluxParams:";
      for (const auto& v : bad) msg += " " + v + ";";
      throw std::invalid_argument(msg);
    }
    return fp;
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> bad;
    if (!(mu > 0.5 && mu < 1.0)) bad.push_back("mu must lie in (1/2,1)");
    if (std::abs(nu - (1.0 - mu)) > 1e-15) bad.push_back("nu must equal 1-mu");
    if (lambda != 0.5) bad.push_back("lambda must equal 1/2");
    if (lambda0_q <= 0) bad.push_back("lambda0 denominator must be positive");
    if (lambda0_q > 0 && std::gcd(lambda0_p, lambda0_q) != 1)
      bad.push_back("lambda0 = p/q must be in lowest terms");
    if (!(lambda0() > mu && lambda0() < 1.0))
      bad.push_back("lambda0 must lie in (mu,1)");
    return bad;
  }
};

/// Defaults used by every experiment: mu = 0.55, lambda0 = 3/5.
inline FluxParams default_params() { return FluxParams::make(0.55, 3, 5); }

/// f(u) = ln(nu + mu e^u), evaluated stably for large |u|.
inline double f_eval(double u, const FluxParams& p) {
  if (u > 30.0) return u + std::log(p.nu * std::exp(-u) + p.mu);
  return std::log(p.nu + p.mu * std::exp(u));
}

/// f'(u) = mu e^u / (nu + mu e^u), strictly inside (0,1), increasing.
inline double f_prime(double u, const FluxParams& p) {
  if (u >= 0.0) return 1.0 / (1.0 + (p.nu / p.mu) * std::exp(-u));
  const double e = std::exp(u);
  return p.mu * e / (p.nu + p.mu * e);
}

inline double f_second(double u, const FluxParams& p) {
  const double d = f_prime(u, p);
  return d * (1.0 - d);
}

/// Shock speed sigma(b) = f(b)/b of the jump from left state b > 0 to 0.
/// Increases from mu (b -> 0) toward 1 (b -> inf); satisfies
/// nu + mu e^b = e^{b sigma(b)}.
inline double sigma_of_b(double b, const FluxParams& p) {
  if (!(b > 0.0)) throw std::invalid_argument("sigma_of_b: b must be positive");
  return f_eval(b, p) / b;
}

/// d sigma / d b, closed form.
inline double sigma_prime_of_b(double b, const FluxParams& p) {
  return (f_prime(b, p) - sigma_of_b(b, p)) / b;
}

inline double sigma_second_of_b(double b, const FluxParams& p) {
  return (f_second(b, p) - 2.0 * sigma_prime_of_b(b, p)) / b;
}

/// Inverse of sigma: the unique positive root b of f(b)/b = sigma, for
/// sigma in (mu, 1).  Bracketing bisection on [1e-12, b_hi] followed by a
/// Newton polish; the bracket exists because sigma(b) is increasing.
inline double phi_of_sigma(double sigma, const FluxParams& p) {
  if (!(sigma > p.mu && sigma < 1.0))
    throw std::invalid_argument("phi_of_sigma: sigma must lie in (mu,1)");
  double lo = 1e-12;
  double hi = std::max(1.0, 1.1 * std::log(1.0 / p.mu) / (1.0 - sigma));
  if (hi > 700.0) hi = 700.0;
  while (sigma_of_b(hi, p) < sigma) {
    hi *= 2.0;
    if (hi > 1e5) throw std::runtime_error("phi_of_sigma: failed to bracket root");
  }
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (sigma_of_b(mid, p) < sigma ? lo : hi) = mid;
  }
  double b = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double r = f_eval(b, p) - sigma * b;
    const double dr = f_prime(b, p) - sigma;
    if (dr == 0.0) break;
    const double step = r / dr;
    b -= step;
    if (!(b > lo * 0.5 && b < hi * 2.0)) { b = 0.5 * (lo + hi); break; }
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(b))) break;
  }
  return b;
}

/// Coefficients of phi(lambda0 + d) = kappa0 + kappa1 d + kappa2 d^2 + O(d^3).
struct KappaExpansion {
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

/// kappa1, kappa2 by Richardson-extrapolated central differences of phi.
inline KappaExpansion kappa_coeffs(const FluxParams& p) {
  const double s0 = p.lambda0();
  KappaExpansion k;
  k.kappa0 = phi_of_sigma(s0, p);
  const double h = std::min(5e-3, 0.2 * std::min(s0 - p.mu, 1.0 - s0));
  const double fp1 = phi_of_sigma(s0 + h, p), fm1 = phi_of_sigma(s0 - h, p);
  const double fp2 = phi_of_sigma(s0 + 2 * h, p), fm2 = phi_of_sigma(s0 - 2 * h, p);
  k.kappa1 = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
  // second derivative, Richardson-extrapolated; kappa2 = phi''/2
  const double d2h = (fp1 - 2.0 * k.kappa0 + fm1) / (h * h);
  const double d22h = (fp2 - 2.0 * k.kappa0 + fm2) / (4.0 * h * h);
  k.kappa2 = (4.0 * d2h - d22h) / 6.0;
  return k;
}

}  // namespace upwind
