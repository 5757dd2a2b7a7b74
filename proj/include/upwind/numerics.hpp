#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace upwind {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; tolerates -inf arguments.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

/// True floor as a double -> double map (floor(-0.3) == -1).
inline double floor_int(double x) { return std::floor(x); }

/// Fractional part ((x)) = x - floor(x), in [0,1).
inline double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // guards against rounding at negative integers
  return f;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules
// ---------------------------------------------------------------------------

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1,1)
  std::vector<double> weights;
};

/// Nodes/weights by Newton iteration on P_n; cached per order.
inline const GaussLegendre& gauss_legendre(int n) {
  static std::vector<GaussLegendre> cache(129);
  if (n < 1 || n > 128) throw std::invalid_argument("gauss_legendre: order out of range");
  GaussLegendre& gl = cache[static_cast<std::size_t>(n)];
  if (!gl.nodes.empty()) return gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[static_cast<std::size_t>(i)] = -x;
    gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[static_cast<std::size_t>(i)] = w;
    gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return gl;
}

/// Fixed-order Gauss-Legendre on [a,b].
template <typename F>
double integrate_gl(F&& f, double a, double b, int order = 24) {
  const GaussLegendre& gl = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    acc += static_cast<long double>(gl.weights[i]) * f(mid + half * gl.nodes[i]);
  return static_cast<double>(acc * half);
}

/// Adaptive quadrature: recursive bisection, GL(15) vs GL(31) as error gauge.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-11,
                          double abs_tol = 0.0, int max_depth = 28) {
  struct Rec {
    F& f;
    double rel_tol, abs_tol;
    double scale = 0.0;
    double run(double a, double b, double coarse, int depth) {
      double mid = 0.5 * (a + b);
      double left = integrate_gl(f, a, mid, 15);
      double right = integrate_gl(f, mid, b, 15);
      double fine = left + right;
      scale = std::max(scale, std::abs(fine));
      double err = std::abs(fine - coarse);
      if (depth <= 0 || err <= rel_tol * scale + abs_tol) return fine;
      return run(a, mid, left, depth - 1) + run(mid, b, right, depth - 1);
    }
  } rec{f, rel_tol, abs_tol};
  return rec.run(a, b, integrate_gl(f, a, b, 15), max_depth);
}

// ---------------------------------------------------------------------------
// Least squares
// ---------------------------------------------------------------------------

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / (n - 2.0) / sxx);
  }
  return fit;
}

/// Slope of log|y| against log|x|; pairs with y==0 are skipped.
inline LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0.0) continue;
    lx.push_back(std::log(std::abs(x[i])));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return fit_line(lx, ly);
}

}  // namespace upwind
