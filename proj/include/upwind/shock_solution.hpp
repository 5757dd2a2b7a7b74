#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "upwind/flux.hpp"
#include "upwind/numerics.hpp"

namespace upwind {

struct QuadratureError : std::runtime_error {
  double t, x, shift;
  QuadratureError(double t_, double x_, double shift_)
      : std::runtime_error("quadrature failed to converge at (t=" +
                           std::to_string(t_) + ", x=" + std::to_string(x_) +
                           "), node-doubling shift " + std::to_string(shift_)),
        t(t_), x(x_), shift(shift_) {}
};

/// The shock path of the construction on [-2T, 0]:
///
///   gamma(t) = lambda0 t - 2 sqrt(-t)            on [-2T, -sqrt(T))
///   gamma_dot(t) = lambda0 + T^{-1/4}  (const)   on [-sqrt(T), 0]
///
/// C^1 at the junction.  The left state u_-(t) solves the jump condition
/// f(u_-)/u_- = gamma_dot(t), which requires gamma_dot < 1, i.e.
/// T > (1 - lambda0)^{-4}.
class ShockCurve {
 public:
  ShockCurve(long T, const FluxParams& p) : T_(T), p_(p) {
    if (T < min_admissible_T(p))
      throw std::invalid_argument(
          "ShockCurve: T=" + std::to_string(T) +
          " too small for lambda0; junction speed would reach 1 "
          "(minimum admissible T is " + std::to_string(min_admissible_T(p)) + ")");
    sqrtT_ = std::sqrt(static_cast<double>(T));
    sigma_junction_ = p.lambda0() + std::pow(static_cast<double>(T), -0.25);
    gamma_junction_ = -p.lambda0() * sqrtT_ - 2.0 * std::pow(static_cast<double>(T), 0.25);
    b_junction_ = phi_of_sigma(sigma_junction_, p);
  }

  static long min_admissible_T(const FluxParams& p) {
    return static_cast<long>(std::floor(std::pow(1.0 - p.lambda0(), -4.0))) + 1;
  }

  long T() const { return T_; }
  const FluxParams& params() const { return p_; }
  double sigma_junction() const { return sigma_junction_; }
  double b_junction() const { return b_junction_; }

  double gamma(double t) const {
    check_domain(t);
    if (t < -sqrtT_) return p_.lambda0() * t - 2.0 * std::sqrt(-t);
    return gamma_junction_ + sigma_junction_ * (t + sqrtT_);
  }

  double gamma_dot(double t) const {
    check_domain(t);
    if (t < -sqrtT_) return p_.lambda0() + 1.0 / std::sqrt(-t);
    return sigma_junction_;
  }

  /// Left state u_-(t) = phi(gamma_dot(t)).
  double u_minus(double t) const {
    const double s = gamma_dot(t);
    if (s >= 1.0)
      throw std::invalid_argument(
          "u_minus: shock speed >= 1; T too small (minimum admissible T is " +
          std::to_string(min_admissible_T(p_)) + ")");
    return phi_of_sigma(s, p_);
  }

 private:
  void check_domain(double t) const {
    if (t < -2.0 * static_cast<double>(T_) - 1e-9 || t > 1e-9)
      throw std::invalid_argument("ShockCurve: t outside [-2T, 0]");
  }

  long T_;
  FluxParams p_;
  double sqrtT_, sigma_junction_, gamma_junction_, b_junction_;
};

struct QuadratureSpec {
  int nodes_per_panel = 24;
  double panel_width = 0.5;
  double fail_tol = 1e-6;  // node-doubling shift beyond this is an error
};

/// c0 = 2 sqrt(pi/kappa0);  a0 = ln((1 + c0 e^kappa0)/(1 + c0)), the limit
/// value of u along the shock.
struct LevelConstants {
  double c0;
  double a0;
};

/// The exact-scheme solution built from the integral superposition
///
///   z(t,x) = 1 + int_{-2T}^0 exp{ -u_-(tau) [x - gamma(tau)
///                                 - gamma_dot(tau) (t - tau)] } (-tau)^{-3/4} dtau
///   u(t,x) = log z(t, x-1) - log z(t, x).
///
/// All evaluation is in log domain.  The substitution tau = -w^4 removes the
/// endpoint singularity and gives the integrand an O(1) width in w uniformly
/// in t, so fixed-width Gauss-Legendre panels in w converge uniformly.
class ExactSolution {
 public:
  ExactSolution(ShockCurve curve, QuadratureSpec quad = {})
      : curve_(std::move(curve)), quad_(quad) {
    const double two_t = 2.0 * static_cast<double>(curve_.T());
    w_max_ = std::pow(two_t, 0.25);
    w_junction_ = std::pow(static_cast<double>(curve_.T()), 0.125);
    kappa_ = kappa_coeffs(curve_.params());
  }

  const ShockCurve& curve() const { return curve_; }
  const KappaExpansion& kappa() const { return kappa_; }
  const QuadratureSpec& quad() const { return quad_; }

  LevelConstants constants() const {
    LevelConstants c;
    c.c0 = 2.0 * std::sqrt(M_PI / kappa_.kappa0);
    c.a0 = std::log((1.0 + c.c0 * std::exp(kappa_.kappa0)) / (1.0 + c.c0));
    return c;
  }

  /// log z(t,x) >= 0.  Valid for every real t.
  double log_z(double t, double x) const {
    return log_add(0.0, log_integral(t, x, quad_.nodes_per_panel));
  }

  /// As log_z, but re-evaluates with doubled nodes; the shift between the two
  /// evaluations is returned through err and checked against fail_tol.
  double log_z_checked(double t, double x, double* err = nullptr) const {
    const double coarse = log_add(0.0, log_integral(t, x, quad_.nodes_per_panel));
    const double fine = log_add(0.0, log_integral(t, x, 2 * quad_.nodes_per_panel));
    const double shift = std::abs(fine - coarse);
    if (err) *err = shift;
    if (shift > quad_.fail_tol) throw QuadratureError(t, x, shift);
    return fine;
  }

  double u(double t, double x) const { return log_z(t, x - 1.0) - log_z(t, x); }

  /// u with a node-doubling convergence gauge.  Absolute log z values lose
  /// accuracy deep in the left state (steep endpoint regime), but their
  /// differences are what the scheme consumes, so the check is on u itself.
  double u_checked(double t, double x, double* err = nullptr) const {
    const int n = quad_.nodes_per_panel;
    const double coarse = log_add(0.0, log_integral(t, x - 1.0, n)) -
                          log_add(0.0, log_integral(t, x, n));
    const double fine = log_add(0.0, log_integral(t, x - 1.0, 2 * n)) -
                        log_add(0.0, log_integral(t, x, 2 * n));
    const double shift = std::abs(fine - coarse);
    if (err) *err = shift;
    if (shift > quad_.fail_tol) throw QuadratureError(t, x, shift);
    return fine;
  }

  /// x such that u(t,x) = a, by bisection on the monotone profile.
  /// Rejects levels outside the attained range.
  double level_curve(double t, double a, double tol_u = 1e-9) const {
    const double t_anchor = std::min(0.0, std::max(t, -2.0 * static_cast<double>(curve_.T())));
    const double center = curve_.gamma(t_anchor);
    double d = 8.0;
    double x_lo = center - d, x_hi = center + d;
    double u_lo = u(t, x_lo), u_hi = u(t, x_hi);
    while (!(u_lo > a && a > u_hi)) {
      d *= 2.0;
      if (d > 1e7)
        throw std::invalid_argument("level_curve: level outside attained range");
      x_lo = center - d;
      x_hi = center + d;
      u_lo = u(t, x_lo);
      u_hi = u(t, x_hi);
    }
    double mid = center;
    for (int i = 0; i < 200; ++i) {
      mid = 0.5 * (x_lo + x_hi);
      const double um = u(t, mid);
      if (std::abs(um - a) <= tol_u) return mid;
      (um > a ? x_lo : x_hi) = mid;
      if (x_hi - x_lo < 1e-13 * (1.0 + std::abs(mid))) break;
    }
    return mid;
  }

  /// Level offset c(a) = x(t*;a) - gamma(t*) at the reference time t* = -T.
  double c_of_a(double a, double t_ref_scale = 1.0) const {
    const double t_ref = -static_cast<double>(curve_.T()) * t_ref_scale;
    return level_curve(t_ref, a) - curve_.gamma(t_ref);
  }

 private:
  // log of the integral part (without the leading 1), tau = -w^4 throughout:
  // 4 * int_0^{w_max} exp{ E(-w^4) } dw, panelwise GL in log domain.  The
  // path has a curvature kink at the junction w = T^{1/8}, so panels are
  // aligned to it segmentwise.
  double log_integral(double t, double x, int nodes) const {
    const FluxParams& p = curve_.params();
    const double lambda0 = p.lambda0();
    const GaussLegendre& gl = gauss_legendre(nodes);
    double total = kNegInf;
    double b_hint = curve_.b_junction();
    std::vector<double> exps(gl.nodes.size());
    const double seg_bounds[3] = {0.0, std::min(w_junction_, w_max_), w_max_};
    for (int seg = 0; seg < 2; ++seg) {
      const double s_lo = seg_bounds[seg], s_hi = seg_bounds[seg + 1];
      if (!(s_hi > s_lo)) continue;
      const int npanels = static_cast<int>(std::ceil((s_hi - s_lo) / quad_.panel_width));
      const double pw = (s_hi - s_lo) / npanels;
      for (int pi = 0; pi < npanels; ++pi) {
        const double a = s_lo + pi * pw, b = a + pw;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double peak = kNegInf;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          const double w = mid + half * gl.nodes[i];
          exps[i] = exponent_at(t, x, w, lambda0, b_hint);
          peak = std::max(peak, exps[i]);
        }
        if (peak == kNegInf) continue;
        long double acc = 0.0L;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
          acc += static_cast<long double>(gl.weights[i]) * std::exp(exps[i] - peak);
        if (acc > 0.0L)
          total = log_add(total, peak + static_cast<double>(std::log(acc * half)));
      }
    }
    return total + std::log(4.0);
  }

  // E(w) = -u_-(tau) * [x - gamma(tau) - gamma_dot(tau)(t - tau)], tau = -w^4.
  double exponent_at(double t, double x, double w, double lambda0,
                     double& b_hint) const {
    const double w2 = w * w;
    const double tau = -(w2 * w2);
    double gam, gdot, bval;
    if (w >= w_junction_) {
      gdot = lambda0 + 1.0 / w2;
      gam = lambda0 * tau - 2.0 * w2;
      bval = u_minus_newton(gdot, b_hint);
      b_hint = bval;
    } else {
      gdot = curve_.sigma_junction();
      gam = curve_.gamma(std::max(tau, -2.0 * static_cast<double>(curve_.T())));
      bval = curve_.b_junction();
    }
    return -bval * (x - gam - gdot * (t - tau));
  }

  // Newton solve of f(b) = sigma * b from a warm start; falls back to the
  // bracketing solver when the iteration wanders.
  double u_minus_newton(double sigma, double hint) const {
    const FluxParams& p = curve_.params();
    double b = hint > 0.0 ? hint : 1.0;
    for (int i = 0; i < 30; ++i) {
      const double r = f_eval(b, p) - sigma * b;
      const double dr = f_prime(b, p) - sigma;
      if (dr <= 0.0) break;
      const double step = r / dr;
      b -= step;
      if (!(b > 0.0 && b < 800.0)) break;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(b))) return b;
    }
    return phi_of_sigma(sigma, p);
  }

  ShockCurve curve_;
  QuadratureSpec quad_;
  double w_max_, w_junction_;
  KappaExpansion kappa_;
};

}  // namespace upwind
