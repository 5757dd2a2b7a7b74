#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace upwind {

/// A real-valued sequence over a contiguous integer index window.
struct Profile {
  long j_min = 0;
  std::vector<double> values;

  long j_max() const { return j_min + static_cast<long>(values.size()) - 1; }
  double at(long j) const {
    if (j < j_min || j > j_max()) throw std::out_of_range("Profile::at");
    return values[static_cast<std::size_t>(j - j_min)];
  }
  bool contains(long j) const { return j >= j_min && j <= j_max(); }
};

/// Total variation sum_{j=j_lo+1}^{j_hi} |p(j) - p(j-1)|.
inline double tv(const Profile& p, long j_lo, long j_hi) {
  if (!(j_lo < j_hi)) throw std::invalid_argument("tv: need j_lo < j_hi");
  if (j_lo < p.j_min || j_hi > p.j_max()) throw std::out_of_range("tv: window outside profile");
  double s = 0.0;
  for (long j = j_lo + 1; j <= j_hi; ++j) s += std::abs(p.at(j) - p.at(j - 1));
  return s;
}

inline double tv(const Profile& p) { return tv(p, p.j_min, p.j_max()); }

}  // namespace upwind
