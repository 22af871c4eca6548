#ifndef BOOLEDYN_INTERVAL_HPP
#define BOOLEDYN_INTERVAL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace booledyn {

// Closed interval [lo, hi]; endpoints may be +-infinity.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo > hi");
  }

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  static Interval whole_line() {
    const double inf = std::numeric_limits<double>::infinity();
    return Interval(-inf, inf);
  }
};

inline bool intersects(const Interval& a, const Interval& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

inline Interval intersect(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::min(a.hi, b.hi));
}

}  // namespace booledyn

#endif
