#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "upwind/binomial.hpp"
#include "upwind/coupled_sim.hpp"
#include "upwind/heat_kernel.hpp"
#include "upwind/numerics.hpp"
#include "upwind/profile.hpp"
#include "upwind/shock_solution.hpp"

namespace upwind {

// ---------------------------------------------------------------------------
// Kernel rows
// ---------------------------------------------------------------------------

/// Row of K^n_k over the k where it is not negligible, built by sideways
/// recurrence from the center value.
struct KernelRow {
  long k_min = 0;
  std::vector<double> values;
  double at(long k) const {
    const long i = k - k_min;
    if (i < 0 || i >= static_cast<long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(i)];
  }
};

inline KernelRow kernel_row(int n, double floor_value = 1e-320) {
  KernelRow row;
  if (n == 0) {
    row.k_min = 0;
    row.values = {1.0};
    return row;
  }
  const int mid = n / 2;
  const double center = binomial_kernel(n, mid);
  std::vector<double> left, right;
  double v = center;
  for (int k = mid; k > 0; --k) {  // K^n_{k-1} = K^n_k * k / (n-k+1)
    v *= static_cast<double>(k) / (n - k + 1);
    if (v < floor_value) break;
    left.push_back(v);
  }
  v = center;
  for (int k = mid; k < n; ++k) {  // K^n_{k+1} = K^n_k * (n-k) / (k+1)
    v *= static_cast<double>(n - k) / (k + 1);
    if (v < floor_value) break;
    right.push_back(v);
  }
  row.k_min = mid - static_cast<long>(left.size());
  row.values.reserve(left.size() + 1 + right.size());
  for (auto it = left.rbegin(); it != left.rend(); ++it) row.values.push_back(*it);
  row.values.push_back(center);
  for (double r : right) row.values.push_back(r);
  return row;
}

// ---------------------------------------------------------------------------
// Source transition table: floor-level weights per time step
// ---------------------------------------------------------------------------

/// For each n in 0..2T the cells m with floor(x(-n;xi)) = m for some xi in
/// supp g', and the corresponding weights
///   w_{n,m} = g(u(-n, m)) - g(u(-n, m+1))  (nonnegative, sums to 1).
struct TransitionRow {
  long m_min = 0;
  std::vector<double> weights;
};

class TransitionTable {
 public:
  TransitionTable(const ExactSolution& sol, const SourceFn& src, long T)
      : sol_(&sol), src_(&src), T_(T) {
    rows_.resize(static_cast<std::size_t>(2 * T + 1));
    // anchor the scan at the mid-level curve once, then track it
    double x_mid = sol.level_curve(-static_cast<double>(T), src.u_star());
    const double c_mid = x_mid - sol.curve().gamma(-static_cast<double>(T));
    for (long n = 0; n <= 2 * T; ++n) {
      const double t = -static_cast<double>(n);
      const long m0 = static_cast<long>(std::floor(sol.curve().gamma(t) + c_mid));
      rows_[static_cast<std::size_t>(n)] = build_row(t, m0);
    }
  }

  const TransitionRow& row(long n) const { return rows_[static_cast<std::size_t>(n)]; }
  long T() const { return T_; }

 private:
  TransitionRow build_row(double t, long m0) const {
    const double hi = src_->support_hi(), lo = src_->support_lo();
    // walk left to the first cell fully above the support
    long m_lo = m0;
    while (sol_->u(t, static_cast<double>(m_lo)) < hi) {
      --m_lo;
      if (m0 - m_lo > 4096) throw std::runtime_error("TransitionTable: lost the shock band");
    }
    long m_hi = m0;
    while (sol_->u(t, static_cast<double>(m_hi + 1)) > lo) {
      ++m_hi;
      if (m_hi - m0 > 4096) throw std::runtime_error("TransitionTable: lost the shock band");
    }
    TransitionRow row;
    row.m_min = m_lo;
    row.weights.resize(static_cast<std::size_t>(m_hi - m_lo + 1));
    double g_here = src_->g(sol_->u(t, static_cast<double>(m_lo)));
    for (long m = m_lo; m <= m_hi; ++m) {
      const double g_next = src_->g(sol_->u(t, static_cast<double>(m + 1)));
      row.weights[static_cast<std::size_t>(m - m_lo)] = g_here - g_next;
      g_here = g_next;
    }
    return row;
  }

  const ExactSolution* sol_;
  const SourceFn* src_;
  long T_;
  std::vector<TransitionRow> rows_;
};

// ---------------------------------------------------------------------------
// Downstream truncation window
// ---------------------------------------------------------------------------

/// n-window around |j|/beta used by the truncated sums.  The |j|^{1/2+eps}
/// half-width is kept, but at reachable |j| the kernel support is wider by
/// the constant ~ 1/beta^{3/2}, so the width is floored at
/// width_factor * sqrt(|j|) (width_factor defaults to 10 / beta^{3/2}).
struct TruncationWindow {
  double eps = 0.05;
  double width_factor = 0.0;  // 0 -> 10 / beta^{3/2}

  std::pair<long, long> range(long j, const FluxParams& p, long n_max) const {
    const double aj = std::abs(static_cast<double>(j));
    const double beta = p.beta();
    const double wf = width_factor > 0.0 ? width_factor : 10.0 / std::pow(beta, 1.5);
    const double center = aj / beta;
    const double half = std::max(std::pow(aj, 0.5 + eps), wf * std::sqrt(aj));
    const long lo = std::max<long>(0, static_cast<long>(std::floor(center - half)));
    const long hi = std::min<long>(n_max, static_cast<long>(std::ceil(center + half)));
    return {lo, hi};
  }
};

// ---------------------------------------------------------------------------
// Representation formula and its truncation
// ---------------------------------------------------------------------------

/// V(j) = sum_n sum_m w_{n,m} K^n_{j-m}: the level-curve representation of
/// the wake profile, evaluated with exact per-cell weights.
inline Profile v_representation(const TransitionTable& table, long j_lo, long j_hi) {
  Profile out;
  out.j_min = j_lo;
  out.values.assign(static_cast<std::size_t>(j_hi - j_lo + 1), 0.0);
  for (long n = 0; n <= 2 * table.T(); ++n) {
    const TransitionRow& row = table.row(n);
    const KernelRow kr = kernel_row(static_cast<int>(n));
    for (std::size_t i = 0; i < row.weights.size(); ++i) {
      const double w = row.weights[i];
      if (w == 0.0) continue;
      const long m = row.m_min + static_cast<long>(i);
      const long ja = std::max(j_lo, m + kr.k_min);
      const long jb = std::min(j_hi, m + kr.k_min + static_cast<long>(kr.values.size()) - 1);
      for (long j = ja; j <= jb; ++j)
        out.values[static_cast<std::size_t>(j - j_lo)] += w * kr.at(j - m);
    }
  }
  return out;
}

/// As v_representation but with the n-sum restricted to the window around
/// |j|/beta.  Used to audit the truncation step.
inline Profile v_representation_truncated(const TransitionTable& table,
                                          const FluxParams& p, long j_lo, long j_hi,
                                          const TruncationWindow& win = {}) {
  Profile out;
  out.j_min = j_lo;
  out.values.assign(static_cast<std::size_t>(j_hi - j_lo + 1), 0.0);
  std::vector<KernelRow> cache(static_cast<std::size_t>(2 * table.T() + 1));
  std::vector<bool> built(cache.size(), false);
  for (long j = j_lo; j <= j_hi; ++j) {
    const auto [n_lo, n_hi] = win.range(j, p, 2 * table.T());
    double acc = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
      if (!built[static_cast<std::size_t>(n)]) {
        cache[static_cast<std::size_t>(n)] = kernel_row(static_cast<int>(n));
        built[static_cast<std::size_t>(n)] = true;
      }
      const TransitionRow& row = table.row(n);
      const KernelRow& kr = cache[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < row.weights.size(); ++i) {
        const long m = row.m_min + static_cast<long>(i);
        acc += row.weights[i] * kr.at(j - m);
      }
    }
    out.values[static_cast<std::size_t>(j - j_lo)] = acc;
  }
  return out;
}

/// Direct double-sum of the wake from recorded source rows:
/// V(j) = sum_rows sum_k psi^n_k K^{-n}_{j-k+1}.
inline Profile v_from_sources(const std::vector<SourceRow>& rows, long j_lo, long j_hi) {
  Profile out;
  out.j_min = j_lo;
  out.values.assign(static_cast<std::size_t>(j_hi - j_lo + 1), 0.0);
  for (const SourceRow& r : rows) {
    const int m = static_cast<int>(-r.n);
    if (m < 0) continue;
    const KernelRow kr = kernel_row(m);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      const double psi = r.values[i];
      if (psi == 0.0) continue;
      const long k = r.k_min + static_cast<long>(i);
      for (long j = j_lo; j <= j_hi; ++j) {
        const double kv = kr.at(j - k + 1);
        if (kv != 0.0) out.values[static_cast<std::size_t>(j - j_lo)] += psi * kv;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// A/B split of the first difference
// ---------------------------------------------------------------------------

struct ABSplit {
  double a = 0.0;
  double b = 0.0;
};

/// V(j) - V(j-1) ~= A(j) - B(j) with the heat-kernel model of the kernel
/// difference: A from G_x, B from G_xx, summed over the truncation window.
inline ABSplit ab_split(const TransitionTable& table, const FluxParams& p, long j,
                        const TruncationWindow& win = {}) {
  ABSplit out;
  const auto [n_lo, n_hi] = win.range(j, p, 2 * table.T());
  for (long n = std::max<long>(1, n_lo); n <= n_hi; ++n) {
    const TransitionRow& row = table.row(n);
    const double t = 0.5 * static_cast<double>(n);
    for (std::size_t i = 0; i < row.weights.size(); ++i) {
      const double w = row.weights[i];
      if (w == 0.0) continue;
      const long m = row.m_min + static_cast<long>(i);
      const double arg = 2.0 * static_cast<double>(j - m) - static_cast<double>(n);
      out.a += 4.0 * w * heat_kernel(t, arg, 1);
      out.b += 4.0 * w * heat_kernel(t, arg, 2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Level-curve cache and the kernel-sum diagnostics
// ---------------------------------------------------------------------------

/// x(-t; xi) on a geometric t-grid with cubic interpolation of the offset
/// r(t) = x(-t;xi) - gamma(-t).  gamma itself is closed form.
class LevelCurve {
 public:
  LevelCurve(const ExactSolution& sol, double xi, double t_lo, double t_hi,
             double ratio = 1.05)
      : sol_(&sol), xi_(xi) {
    t_lo = std::max(t_lo, 1.0);
    for (double t = t_lo / ratio / ratio; t <= t_hi * ratio * ratio; t *= ratio)
      grid_.push_back(t);
    r_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const double t = std::min(grid_[i], 2.0 * static_cast<double>(sol.curve().T()));
      r_[i] = sol.level_curve(-t, xi) - sol.curve().gamma(-t);
    }
  }

  double xi() const { return xi_; }

  double x(double t) const {
    return sol_->curve().gamma(-t) + offset(t);
  }

  /// interpolated r(t); Catmull-Rom in log t
  double offset(double t) const {
    const double lt = std::log(t);
    const double l0 = std::log(grid_.front());
    const double dl = std::log(grid_[1]) - l0;
    double fi = (lt - l0) / dl;
    std::size_t i = static_cast<std::size_t>(std::max(1.0, std::min(fi, static_cast<double>(grid_.size()) - 3.0)));
    const double s = fi - static_cast<double>(i);
    const double p0 = r_[i - 1], p1 = r_[i], p2 = r_[i + 1], p3 = r_[i + 2];
    const double m1 = 0.5 * (p2 - p0), m2 = 0.5 * (p3 - p1);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p1 + (s3 - 2 * s2 + s) * m1 +
           (-2 * s3 + 3 * s2) * p2 + (s3 - s2) * m2;
  }

 private:
  const ExactSolution* sol_;
  double xi_;
  std::vector<double> grid_, r_;
};

enum class KernelSum { H, h, L, l, M, N };

/// The six downstream diagnostics.  Capital letters are lattice sums (H, M
/// with floored positions, L without), lower case the matching integrals; N
/// carries the fractional-part phase of the level curve.
inline double kernel_sums(const LevelCurve& curve, const FluxParams& p, long j,
                          KernelSum which, const TruncationWindow& win, long n_max) {
  const auto [n_lo_l, n_hi_l] = win.range(j, p, n_max);
  const double t_lo = std::max<double>(1, n_lo_l), t_hi = n_hi_l;
  const int q = p.lambda0_q;
  switch (which) {
    case KernelSum::H:
    case KernelSum::M: {
      double s = 0.0;
      for (long n = std::max<long>(1, n_lo_l); n <= n_hi_l; ++n) {
        const double pos = std::floor(curve.x(static_cast<double>(n)));
        const double arg = 2.0 * (static_cast<double>(j) - pos) - static_cast<double>(n);
        s += heat_kernel(0.5 * n, arg, which == KernelSum::H ? 2 : 1);
      }
      return s;
    }
    case KernelSum::L: {
      double s = 0.0;
      for (long n = std::max<long>(1, n_lo_l); n <= n_hi_l; ++n) {
        const double arg = 2.0 * (static_cast<double>(j) - curve.x(static_cast<double>(n))) -
                           static_cast<double>(n);
        s += heat_kernel(0.5 * n, arg, 1);
      }
      return s;
    }
    case KernelSum::h:
    case KernelSum::l: {
      const int deriv = which == KernelSum::h ? 2 : 1;
      return integrate_adaptive(
          [&](double t) {
            const double arg = 2.0 * (static_cast<double>(j) - curve.x(t)) - t;
            return heat_kernel(0.5 * t, arg, deriv);
          },
          t_lo, t_hi, 1e-10, 1e-16);
    }
    case KernelSum::N: {
      // integral over s of G_xx(qs/2, 2(j - x(-qs)) - qs) ((q [x(-qs)+lambda0 qs]))
      const double s_lo = t_lo / q, s_hi = t_hi / q;
      auto theta = [&](double s) {
        const double tau = q * s;
        return q * (curve.x(tau) + p.lambda0() * tau);
      };
      auto smooth = [&](double s) {
        const double tau = q * s;
        const double arg = 2.0 * (static_cast<double>(j) - curve.x(tau)) - tau;
        return heat_kernel(0.5 * tau, arg, 2);
      };
      // integrate piecewise between integer crossings of theta (monotone)
      double total = 0.0;
      double s = s_lo;
      double th = theta(s);
      while (s < s_hi) {
        const double rate = std::abs(q * q / std::sqrt(q * s));  // d theta / ds
        double step = 0.45 / rate;
        double s_next = std::min(s + step, s_hi);
        double th_next = theta(s_next);
        if (std::floor(th_next) != std::floor(th)) {
          // bisect the crossing
          double a = s, b = s_next;
          const double target = std::floor(th) + (th_next > th ? 1.0 : 0.0);
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            ((theta(mid) < target) == (th < target) ? a : b) = mid;
          }
          s_next = 0.5 * (a + b);
          th_next = theta(s_next);
        }
        total += integrate_gl([&](double ss) { return smooth(ss) * frac(theta(ss)); },
                              s, s_next, 12);
        s = s_next;
        // nudge across the jump
        s = std::nextafter(s, s_hi + 1.0);
        th = theta(s);
      }
      return total;
    }
  }
  throw std::logic_error("kernel_sums: unknown selector");
}

// ---------------------------------------------------------------------------
// The resonance functional Pi
// ---------------------------------------------------------------------------

/// Pi(z) = int (2s^2-1) e^{-s^2} int g'(xi) (( q c(xi) + z + q(s-sqrt8)/(sqrt2 beta) )) dxi ds.
///
/// The sawtooth phase advances omega = q/(sqrt2 beta) cycles per unit s, and
/// the Gaussian weight suppresses each sawtooth harmonic m by
/// exp(-(pi m omega)^2).  For every admissible parameter set omega >= 11.3,
/// so |Pi| < 1e-540: representable in no native type.  Pi is therefore
/// carried in scaled form,
///     Pi(z) = exp(log_scale) * shape(z),
/// where the exact sigma-integral (Poisson resummation of the Gaussian
/// against the sawtooth) gives
///     shape(z)   = sum_m (m e^{-(pi omega)^2 (m^2-1)}) Im[ e^{2 pi i m (z - omega sqrt8 ... )} Ghat_m ],
///     log_scale  = ln(2 pi^{3/2} omega^2) - (pi omega)^2,
///     Ghat_m     = int g'(xi) e^{2 pi i m q c(xi)} dxi.
/// Only m = 1 survives at real parameters; the m >= 2 ratios underflow to 0.
struct PiSpec {
  FluxParams params;
  double omega = 0.0;
  double log_scale = 0.0;            // natural log of the overall scale
  std::vector<double> xi_nodes;      // GL nodes over supp g'
  std::vector<double> xi_gweights;   // GL weight * g'(xi)
  std::vector<double> c_values;      // c(xi) at the nodes
  int m_max = 3;

  std::complex<double> ghat(int m) const {
    std::complex<double> acc{0.0, 0.0};
    const int q = params.lambda0_q;
    for (std::size_t i = 0; i < xi_nodes.size(); ++i) {
      const double phase = 2.0 * M_PI * m * q * c_values[i];
      acc += xi_gweights[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
  }
};

inline PiSpec build_pi_spec(const ExactSolution& sol, const SourceFn& src,
                            int xi_nodes = 48, double t_ref_scale = 1.0) {
  PiSpec spec;
  spec.params = sol.curve().params();
  const double beta = spec.params.beta();
  spec.omega = spec.params.lambda0_q / (std::sqrt(2.0) * beta);
  spec.log_scale = std::log(2.0 * std::pow(M_PI, 1.5) * spec.omega * spec.omega) -
                   std::pow(M_PI * spec.omega, 2.0);
  const GaussLegendre& gl = gauss_legendre(xi_nodes);
  const double a = src.support_lo(), b = src.support_hi();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double xi = mid + half * gl.nodes[i];
    spec.xi_nodes.push_back(xi);
    spec.xi_gweights.push_back(gl.weights[i] * half * src.g_prime(xi));
    spec.c_values.push_back(sol.c_of_a(xi, t_ref_scale));
  }
  return spec;
}

/// shape(z) = Pi(z) / exp(log_scale); 1-periodic with zero mean.
inline double pi_shape(double z, const PiSpec& spec) {
  const double sqrt8_shift = spec.omega * std::sqrt(8.0);
  double out = 0.0;
  for (int m = 1; m <= spec.m_max; ++m) {
    const double damp_log = -std::pow(M_PI * spec.omega, 2.0) * (static_cast<double>(m) * m - 1.0);
    const double ratio = static_cast<double>(m) * std::exp(damp_log);
    if (ratio == 0.0) continue;
    const std::complex<double> gm = spec.ghat(m);
    const double ph = 2.0 * M_PI * m * (z - sqrt8_shift);
    out += ratio * (std::sin(ph) * gm.real() + std::cos(ph) * gm.imag());
  }
  return out;
}

/// Pi(z) itself, valid only when it does not underflow (synthetic small
/// omega); production code uses pi_shape + PiSpec::log_scale.
inline double pi_value(double z, const PiSpec& spec) {
  return std::exp(spec.log_scale) * pi_shape(z, spec);
}

/// Literal evaluation of the sigma-integral, piecewise-exact between the
/// sawtooth jumps (oracle for pi_shape; usable when omega is small enough
/// that nothing underflows).
inline double pi_value_reference(double z, const PiSpec& spec, double sigma_range = 10.0) {
  const int q = spec.params.lambda0_q;
  auto f1 = [](double s) { return -s * std::exp(-s * s); };
  auto f2 = [](double s) { return -(s * s + 0.5) * std::exp(-s * s); };
  double total = 0.0;
  for (std::size_t i = 0; i < spec.xi_nodes.size(); ++i) {
    const double theta = q * spec.c_values[i] + z - spec.omega * std::sqrt(8.0);
    // jumps of ((theta + omega s)) at s_k = (k - theta)/omega
    const long k_lo = static_cast<long>(std::ceil(theta - spec.omega * sigma_range));
    const long k_hi = static_cast<long>(std::floor(theta + spec.omega * sigma_range));
    double inner = 0.0;
    double s_prev = -sigma_range;
    for (long k = k_lo; k <= k_hi + 1; ++k) {
      const double s_k = k <= k_hi ? (static_cast<double>(k) - theta) / spec.omega : sigma_range;
      // on (s_prev, s_k): ((theta + omega s)) = theta + omega s - (k-1)
      const double c0 = theta - static_cast<double>(k - 1);
      inner += c0 * (f1(s_k) - f1(s_prev)) + spec.omega * (f2(s_k) - f2(s_prev));
      s_prev = s_k;
    }
    total += spec.xi_gweights[i] * inner;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Audit and sweep
// ---------------------------------------------------------------------------

struct AuditReport {
  long T = 0;
  double shape_max = 0.0;        // max_z |shape(z)|
  double shape_quad_err = 0.0;   // xi-refinement shift of the shape
  double log10_scale = 0.0;      // log10 of the suppressed overall scale
  bool assumption_holds = false;
  double level_a = 0.0, level_b = 0.0;  // |shape| >= shape_max/2 on (a,b)
  double predicted_shape_sum = 0.0;     // sum over bands of |shape(z_j)| / j
  double direct_shape_sum = 0.0;        // sum_{sqrtT<=j<=T} |shape(z_j)| / j
  double measured_tv = 0.0;             // filled by the caller when available
};

inline double z_of_j(long j, const FluxParams& p) {
  return 2.0 * p.lambda0_q * std::sqrt(std::abs(static_cast<double>(j)) / p.beta());
}

inline AuditReport tv_lower_bound_audit(long T, const PiSpec& spec,
                                        const PiSpec* spec_refined = nullptr) {
  AuditReport rep;
  rep.T = T;
  rep.log10_scale = spec.log_scale / std::log(10.0);
  const int grid = 2048;
  double zmax = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double z = (i + 0.5) / grid;
    const double v = std::abs(pi_shape(z, spec));
    if (v > rep.shape_max) {
      rep.shape_max = v;
      zmax = z;
    }
  }
  if (spec_refined) {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double z = (i + 0.5) / 64.0;
      worst = std::max(worst, std::abs(pi_shape(z, spec) - pi_shape(z, *spec_refined)));
    }
    rep.shape_quad_err = worst;
  }
  rep.assumption_holds = rep.shape_max > 10.0 * std::max(rep.shape_quad_err, 1e-300);
  // maximal interval around the peak with |shape| >= max/2, wrapped into (0,1)
  const double eps = 0.5 * rep.shape_max;
  double a = zmax, b = zmax;
  for (int i = 1; i < grid; ++i) {
    const double z = zmax - static_cast<double>(i) / grid;
    if (std::abs(pi_shape(z, spec)) < eps) break;
    a = z;
  }
  for (int i = 1; i < grid; ++i) {
    const double z = zmax + static_cast<double>(i) / grid;
    if (std::abs(pi_shape(z, spec)) < eps) break;
    b = z;
  }
  rep.level_a = a - std::floor(a);
  rep.level_b = rep.level_a + (b - a);
  const FluxParams& p = spec.params;
  const double q = p.lambda0_q, beta = p.beta();
  const double sqrtT = std::sqrt(static_cast<double>(T));
  for (long j = static_cast<long>(std::ceil(sqrtT)); j <= T; ++j)
    rep.direct_shape_sum += std::abs(pi_shape(frac(z_of_j(j, p)), spec)) / static_cast<double>(j);
  // banded sum over J_n = (n + a, n + b)
  const long n_lo = static_cast<long>(std::floor(z_of_j(static_cast<long>(std::ceil(sqrtT)), p)));
  const long n_hi = static_cast<long>(std::ceil(z_of_j(T, p)));
  for (long n = n_lo; n <= n_hi; ++n) {
    const long jn = static_cast<long>(std::ceil(beta * std::pow(n + rep.level_a, 2.0) / (4.0 * q * q)));
    const long kn = static_cast<long>(std::floor(beta * std::pow(n + rep.level_b, 2.0) / (4.0 * q * q)));
    for (long j = std::max(jn, static_cast<long>(std::ceil(sqrtT))); j <= std::min(kn, T); ++j)
      rep.predicted_shape_sum += std::abs(pi_shape(frac(z_of_j(j, p)), spec)) / static_cast<double>(j);
  }
  return rep;
}

struct SweepRow {
  long T = 0;
  double tv_v_window = 0.0;   // TV of V over [-T, -sqrt(T)]
  double tv_v_full = 0.0;     // TV of V over the whole row  (= L1 shift distance)
  double tv_u_initial = 0.0;  // TV of the initial u row     (= L1 shift distance of data)
  double tv_u_ratio = 0.0;    // max/min of TV(u-row) over the run checkpoints
  double l1_shift_ratio = 0.0;
  double direct_shape_sum = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  LineFit fit;  // tv_v_window against ln T
};

inline SweepReport tv_sweep(const std::vector<long>& T_list, const RunConfig& base,
                            const PiSpec* spec = nullptr) {
  if (T_list.size() < 4) throw std::invalid_argument("tv_sweep: need >= 4 sweep points");
  SweepReport rep;
  std::vector<double> lnT, tvs;
  for (long T : T_list) {
    RunConfig cfg = base;
    cfg.T = T;
    GridRun run(cfg);
    const double tv_u0 = run.tv_u_row();
    run.run_all();
    const Profile V = run.extract_V();
    SweepRow row;
    row.T = T;
    const long j_hi = -static_cast<long>(std::ceil(std::sqrt(static_cast<double>(T))));
    row.tv_v_window = tv(V, -T, j_hi);
    row.tv_v_full = tv(V);
    row.tv_u_initial = tv_u0;
    double lo = 1e300, hi = 0.0;
    for (const CheckpointReport& c : run.checkpoints()) {
      lo = std::min(lo, c.tv_u);
      hi = std::max(hi, c.tv_u);
    }
    row.tv_u_ratio = hi / lo;
    row.l1_shift_ratio = row.tv_v_full / row.tv_u_initial;
    if (spec) {
      for (long j = -j_hi; j <= T; ++j)
        row.direct_shape_sum +=
            std::abs(pi_shape(frac(z_of_j(j, spec->params)), *spec)) / static_cast<double>(j);
    }
    rep.rows.push_back(row);
    lnT.push_back(std::log(static_cast<double>(T)));
    tvs.push_back(row.tv_v_window);
  }
  rep.fit = fit_line(lnT, tvs);
  return rep;
}

}  // namespace upwind
