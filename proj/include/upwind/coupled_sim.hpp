#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "upwind/flux.hpp"
#include "upwind/linear_wave.hpp"
#include "upwind/numerics.hpp"
#include "upwind/profile.hpp"
#include "upwind/shock_solution.hpp"

namespace upwind {

/// Smooth compactly supported source coupling: g'(u) is a standard bump of
/// width `width` centered at u_star, normalized to unit integral; g is its
/// cumulative function (0 below the support, 1 above).  Only differences of
/// g enter the scheme, so the value above the support is a free constant.
class SourceFn {
 public:
  SourceFn(double u_star, double width) : u_star_(u_star), width_(width) {
    if (!(width > 0.0)) throw std::invalid_argument("SourceFn: width must be positive");
    const double raw = integrate_adaptive([](double r) { return bump_raw(r); },
                                          -1.0, 1.0, 1e-13);
    amplitude_ = 1.0 / (raw * width_);
  }

  double u_star() const { return u_star_; }
  double width() const { return width_; }
  double amplitude() const { return amplitude_; }
  double support_lo() const { return u_star_ - width_; }
  double support_hi() const { return u_star_ + width_; }

  double g_prime(double u) const {
    const double r = (u - u_star_) / width_;
    if (std::abs(r) >= 1.0) return 0.0;
    return amplitude_ * bump_raw(r);
  }

  double g(double u) const {
    const double r = (u - u_star_) / width_;
    if (r <= -1.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return amplitude_ * width_ *
           integrate_gl([](double s) { return bump_raw(s); }, -1.0, r, 32);
  }

 private:
  static double bump_raw(double r) {
    const double d = r * r - 1.0;
    return d < 0.0 ? std::exp(1.0 / d) : 0.0;
  }

  double u_star_, width_, amplitude_;
};

/// Default source: centered at a0 with width min(a0, kappa0 - a0)/4.
inline SourceFn default_source(const ExactSolution& sol) {
  const LevelConstants lc = sol.constants();
  const double k0 = sol.kappa().kappa0;
  return SourceFn(lc.a0, std::min(lc.a0, k0 - lc.a0) / 4.0);
}

/// One linear upwind step of the second component with source:
/// v'_j = lambda v_{j-1} + (1-lambda) v_j - [g(u_j) - g(u_{j-1})].
/// u spans one extra cell on the left (u.size() == v.size() + 1); the
/// neighbor value left of the window is taken as 0.
inline std::vector<double> godunov_update_v(const std::vector<double>& v,
                                            const std::vector<double>& u,
                                            const SourceFn& g, const FluxParams& p) {
  if (u.size() != v.size() + 1)
    throw std::invalid_argument("godunov_update_v: rows misaligned (need u.size == v.size()+1)");
  std::vector<double> out(v.size());
  const double lam = p.lambda;
  double g_prev = g.g(u[0]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double g_here = g.g(u[i + 1]);
    const double left = (i == 0) ? 0.0 : v[i - 1];
    out[i] = lam * left + (1.0 - lam) * v[i] - (g_here - g_prev);
    g_prev = g_here;
  }
  return out;
}

struct RunConfig {
  FluxParams params = default_params();
  long T = 256;
  double u_star = -1.0;      // < 0 -> default a0
  double source_width = -1.0;  // < 0 -> default (see default_source)
  long left_margin = 0;      // 0 -> ceil(8 sqrt(2T)) + 64
  long right_margin = 64;
  QuadratureSpec quad;
  bool record_sources = false;
  bool record_checkpoint_rows = false;
  double abort_tol = 1e-6;   // drift guard for the u-row spot checks

  std::vector<std::string> violations() const {
    std::vector<std::string> bad = params.violations();
    const long t_min = ShockCurve::min_admissible_T(params);
    if (T < t_min)
      bad.push_back("T=" + std::to_string(T) + " below minimum admissible " +
                    std::to_string(t_min));
    if (right_margin < 8) bad.push_back("right_margin must be >= 8");
    if (left_margin < 0) bad.push_back("left_margin must be >= 0");
    return bad;
  }
};

struct SourceRow {
  long n;      // time level the sources fired at
  long k_min;
  std::vector<double> values;  // psi^n_k
};

struct CheckpointReport {
  long n;
  double max_residual;  // |u_row - u_exact| over the spot checks
  double tv_u;
};

struct CheckpointRow {
  long n;
  long j_min;
  std::vector<double> u;
};

/// A full discrete run: u sampled from the exact solution at n = -2T and
/// advanced by the scalar upwind scheme (boundary cells re-seeded from the
/// quadrature each step), v advanced from zero data by the sourced linear
/// step.  After 2T+1 steps the wake profile is read off as V(j) = v^1_{j+1}.
class GridRun {
 public:
  explicit GridRun(const RunConfig& cfg)
      : cfg_(validated(cfg)), sol_(make_solution(cfg_)), source_(make_source(cfg_, sol_)) {
    const double k0 = sol_.kappa().kappa0;
    if (!(source_.support_lo() > 0.0 && source_.support_hi() < k0))
      throw std::invalid_argument("RunConfig: source support must lie inside (0, kappa0)");
    long lm = cfg_.left_margin > 0
                  ? cfg_.left_margin
                  : static_cast<long>(std::ceil(8.0 * std::sqrt(2.0 * cfg_.T))) + 64;
    for (int attempt = 0; attempt < 3; ++attempt) {
      init_window(lm);
      if (edges_clear()) return;
      lm *= 2;  // enlarge and retry
    }
    throw std::runtime_error("GridRun: window margins too small for the source support");
  }

  const ExactSolution& solution() const { return sol_; }
  const SourceFn& source() const { return source_; }
  long n() const { return n_; }
  long j_lo() const { return j_lo_; }
  long j_hi() const { return j_hi_; }
  const std::vector<double>& u_row() const { return u_; }  // over [j_lo-1, j_hi]
  const std::vector<double>& v_row() const { return v_; }  // over [j_lo, j_hi]
  const std::vector<SourceRow>& sources() const { return psi_rows_; }
  const std::vector<CheckpointReport>& checkpoints() const { return checkpoints_; }
  const std::vector<CheckpointRow>& checkpoint_rows() const { return checkpoint_rows_; }

  /// Advance one step; record sources if configured.
  void step() {
    const FluxParams& p = cfg_.params;
    if (cfg_.record_sources) record_psi();
    // v first (needs u at time n)
    double g_prev = source_.g(u_[0]);
    double v_left = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const double g_here = source_.g(u_[i + 1]);
      const double keep = v_[i];
      v_[i] = p.lambda * v_left + (1.0 - p.lambda) * v_[i] - (g_here - g_prev);
      v_left = keep;
      g_prev = g_here;
    }
    // u: in-place upwind sweep, then re-seed the left boundary cell
    double f_prev = f_eval(u_[0], p);
    for (std::size_t i = 1; i < u_.size(); ++i) {
      const double f_here = f_eval(u_[i], p);
      u_[i] -= (f_here - f_prev);
      f_prev = f_here;
    }
    ++n_;
    const double xb = static_cast<double>(j_lo_ - 1);
    u_[0] = sol_.log_z(n_, xb - 1.0) - sol_.log_z(n_, xb);
    if (std::abs(v_.front()) > 1e-13)
      throw std::runtime_error("GridRun: v leaked past the left margin");
  }

  /// Run to n = 1 with drift checks at n in {-2T, -T, -sqrt(T), 0}.
  void run_all() {
    const long T = cfg_.T;
    const long csqrt = -static_cast<long>(std::ceil(std::sqrt(static_cast<double>(T))));
    check_now();
    while (n_ < 1) {
      step();
      if (n_ == -T || n_ == csqrt || n_ == 0) check_now();
    }
  }

  /// V(j) = v^1_{j+1}; call after run_all.
  Profile extract_V() const {
    if (n_ != 1) throw std::logic_error("extract_V: run not at n = 1");
    Profile out;
    out.j_min = j_lo_ - 1;
    out.values.assign(v_.begin(), v_.end());
    return out;
  }

  double tv_u_row() const {
    double s = 0.0;
    for (std::size_t i = 1; i < u_.size(); ++i) s += std::abs(u_[i] - u_[i - 1]);
    return s;
  }

 private:
  static RunConfig validated(const RunConfig& cfg) {
    const auto bad = cfg.violations();
    if (!bad.empty()) {
      std::string msg = "RunConfig:";
      for (const auto& b : bad) msg += " " + b + ";";
      throw std::invalid_argument(msg);
    }
    return cfg;
  }
  static ExactSolution make_solution(const RunConfig& cfg) {
    return ExactSolution(ShockCurve(cfg.T, cfg.params), cfg.quad);
  }
  static SourceFn make_source(const RunConfig& cfg, const ExactSolution& sol) {
    if (cfg.u_star <= 0.0 && cfg.source_width <= 0.0) return default_source(sol);
    const SourceFn def = default_source(sol);
    const double us = cfg.u_star > 0.0 ? cfg.u_star : def.u_star();
    const double w = cfg.source_width > 0.0 ? cfg.source_width : def.width();
    return SourceFn(us, w);
  }

  void init_window(long left_margin) {
    n_ = -2 * cfg_.T;
    const double gamma_start = sol_.curve().gamma(static_cast<double>(n_));
    j_lo_ = static_cast<long>(std::floor(gamma_start)) - left_margin;
    j_hi_ = cfg_.right_margin;
    // convergence spot-check before committing to the whole row (throws
    // QuadratureError when node doubling moves the result)
    for (double frac_pos : {0.1, 0.5, 0.9})
      sol_.log_z_checked(static_cast<double>(n_),
                         gamma_start + frac_pos * (j_hi_ - gamma_start));
    sol_.log_z_checked(static_cast<double>(n_), static_cast<double>(j_lo_));
    const std::size_t width = static_cast<std::size_t>(j_hi_ - j_lo_ + 2);
    // one log_z row over [j_lo-2, j_hi] gives the u row by differencing
    std::vector<double> lz(width + 1);
    for (std::size_t i = 0; i < lz.size(); ++i)
      lz[i] = sol_.log_z(static_cast<double>(n_), static_cast<double>(j_lo_ - 2 + static_cast<long>(i)));
    u_.resize(width);
    for (std::size_t i = 0; i < width; ++i) u_[i] = lz[i] - lz[i + 1];
    v_.assign(width - 1, 0.0);
    psi_rows_.clear();
    checkpoints_.clear();
    checkpoint_rows_.clear();
  }

  bool edges_clear() const {
    // source must be inactive at both edges of the initial row
    return u_[0] > source_.support_hi() && u_[1] > source_.support_hi() &&
           u_.back() < source_.support_lo();
  }

  void record_psi() {
    SourceRow row;
    row.n = n_;
    row.k_min = 0;
    const double lo = source_.support_lo();
    bool found = false;
    double g_prev = source_.g(u_[0]);
    for (std::size_t i = 1; i < u_.size(); ++i) {
      const double g_here = source_.g(u_[i]);
      const double psi = -(g_here - g_prev);
      g_prev = g_here;
      const bool active = psi != 0.0;
      if (active && !found) {
        found = true;
        row.k_min = j_lo_ + static_cast<long>(i) - 1;
      }
      if (found) row.values.push_back(psi);
      // the band is contiguous on a monotone row; stop once past it
      if (found && !active && u_[i] < lo) break;
    }
    while (!row.values.empty() && row.values.back() == 0.0) row.values.pop_back();
    psi_rows_.push_back(std::move(row));
  }

  void check_now() {
    CheckpointReport rep;
    rep.n = n_;
    rep.tv_u = tv_u_row();
    rep.max_residual = 0.0;
    const long span = j_hi_ - (j_lo_ - 1);
    for (int s = 0; s <= 8; ++s) {
      const long j = j_lo_ - 1 + (span * s) / 8;
      const double exact = sol_.u(static_cast<double>(n_), static_cast<double>(j));
      const double got = u_[static_cast<std::size_t>(j - (j_lo_ - 1))];
      rep.max_residual = std::max(rep.max_residual, std::abs(got - exact));
    }
    if (rep.max_residual > cfg_.abort_tol)
      throw std::runtime_error("GridRun: u-row drifted from the exact solution (residual " +
                               std::to_string(rep.max_residual) + " at n=" + std::to_string(n_) + ")");
    checkpoints_.push_back(rep);
    if (cfg_.record_checkpoint_rows)
      checkpoint_rows_.push_back(CheckpointRow{n_, j_lo_ - 1, u_});
  }

  RunConfig cfg_;
  ExactSolution sol_;
  SourceFn source_;
  long n_ = 0, j_lo_ = 0, j_hi_ = 0;
  std::vector<double> u_, v_;
  std::vector<SourceRow> psi_rows_;
  std::vector<CheckpointReport> checkpoints_;
  std::vector<CheckpointRow> checkpoint_rows_;
};

}  // namespace upwind
