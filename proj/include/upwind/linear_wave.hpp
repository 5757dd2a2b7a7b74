#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "upwind/flux.hpp"
#include "upwind/numerics.hpp"

namespace upwind {

/// A row of the linearized scheme in log domain: values[i] = log z_{j_min+i}.
/// z > 0 is required; -inf entries are tolerated only by delta-data tests.
struct LogRow {
  long j_min = 0;
  std::vector<double> values;

  long j_max() const { return j_min + static_cast<long>(values.size()) - 1; }
  double at(long j) const { return values[static_cast<std::size_t>(j - j_min)]; }
};

/// One step of z^{n+1}_j = mu z^n_{j-1} + nu z^n_j, in log domain via
/// log-sum-exp.  The left edge is consumed: output covers j_min+1 .. j_max.
inline LogRow linear_step(const LogRow& row, const FluxParams& p) {
  if (row.values.size() < 2)
    throw std::invalid_argument("linear_step: row needs at least 2 entries");
  LogRow out;
  out.j_min = row.j_min + 1;
  out.values.resize(row.values.size() - 1);
  const double lmu = std::log(p.mu), lnu = std::log(p.nu);
  for (std::size_t i = 0; i + 1 < row.values.size(); ++i)
    out.values[i] = log_add(lmu + row.values[i], lnu + row.values[i + 1]);
  return out;
}

/// Discrete Cole-Hopf readout u_j = log z_{j-1} - log z_j, j = j_min+1 .. j_max.
inline std::vector<double> cole_hopf_u(const LogRow& row) {
  if (row.values.size() < 2)
    throw std::invalid_argument("cole_hopf_u: row needs at least 2 entries");
  std::vector<double> u(row.values.size() - 1);
  for (std::size_t i = 0; i + 1 < row.values.size(); ++i)
    u[i] = row.values[i] - row.values[i + 1];
  return u;
}

/// Upwind update u^{n+1}_j = u^n_j - [f(u^n_j) - f(u^n_{j-1})].
/// Consumes the left edge: output index i corresponds to input index i+1.
inline std::vector<double> godunov_update_u(const std::vector<double>& u,
                                            const FluxParams& p) {
  if (u.size() < 2)
    throw std::invalid_argument("godunov_update_u: row needs at least 2 entries");
  std::vector<double> out(u.size() - 1);
  double f_prev = f_eval(u[0], p);
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double f_here = f_eval(u[i], p);
    out[i - 1] = u[i] - (f_here - f_prev);
    f_prev = f_here;
  }
  return out;
}

/// Max residual between the two routes around the Cole-Hopf square:
/// step z then read off u, versus read off u then apply the nonlinear update.
inline double verify_cole_hopf(const LogRow& row, const FluxParams& p) {
  if (row.values.size() < 3)
    throw std::invalid_argument("verify_cole_hopf: row needs at least 3 entries");
  const std::vector<double> via_z = cole_hopf_u(linear_step(row, p));
  const std::vector<double> via_u = godunov_update_u(cole_hopf_u(row), p);
  double worst = 0.0;
  for (std::size_t i = 0; i < via_z.size(); ++i)
    worst = std::max(worst, std::abs(via_z[i] - via_u[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Two-wave superposition
// ---------------------------------------------------------------------------

/// z(t,x) = exp(-b1 [x - x1 - sigma(b1) t]) + exp(-b2 [x - x2 - sigma(b2) t]),
/// the nonlinear superposition of two exponential traveling waves.
struct TwoWaveSpec {
  double b1, b2;  // 0 < b1 < b2
  double x1, x2;
};

struct TwoWaveProps {
  double sigma_star;    // speed of the composite front
  double x_bar;         // center abscissa at t = 0
  double center_value;  // u(0, x_bar) = ln((e^b1 + e^b2)/2)
};

inline double two_wave_log_z(const TwoWaveSpec& s, const FluxParams& p, double t,
                             double x) {
  const double e1 = -s.b1 * (x - s.x1 - sigma_of_b(s.b1, p) * t);
  const double e2 = -s.b2 * (x - s.x2 - sigma_of_b(s.b2, p) * t);
  return log_add(e1, e2);
}

inline double two_wave_u(const TwoWaveSpec& s, const FluxParams& p, double t,
                         double x) {
  return two_wave_log_z(s, p, t, x - 1.0) - two_wave_log_z(s, p, t, x);
}

inline TwoWaveProps two_wave_props(const TwoWaveSpec& s, const FluxParams& p) {
  if (!(s.b1 > 0.0 && s.b1 < s.b2))
    throw std::invalid_argument("two_wave_props: need 0 < b1 < b2");
  TwoWaveProps r;
  r.sigma_star = (s.b1 * sigma_of_b(s.b1, p) - s.b2 * sigma_of_b(s.b2, p)) /
                 (s.b1 - s.b2);
  r.x_bar = (s.x1 * s.b1 - s.x2 * s.b2) / (s.b1 - s.b2);
  r.center_value = std::log(0.5 * (std::exp(s.b1) + std::exp(s.b2)));
  return r;
}

}  // namespace upwind
