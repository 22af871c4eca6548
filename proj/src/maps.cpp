#include "booledyn/maps.hpp"

#include <algorithm>
#include <stdexcept>

#include "booledyn/errors.hpp"

namespace booledyn {

namespace {

constexpr double kGuardScale = 1e-12;
constexpr int kMaxBisection = 200;
constexpr int kBackwardOrbitCap = 1000000;

}  // namespace

GeneralizedBoole::GeneralizedBoole(std::vector<double> poles, std::vector<double> weights)
    : poles_(std::move(poles)), weights_(std::move(weights)) {
  if (poles_.empty()) throw std::invalid_argument("GeneralizedBoole: need at least one pole");
  if (poles_.size() != weights_.size())
    throw std::invalid_argument("GeneralizedBoole: poles/weights size mismatch");
  for (std::size_t k = 0; k + 1 < poles_.size(); ++k)
    if (!(poles_[k] < poles_[k + 1]))
      throw std::invalid_argument("GeneralizedBoole: poles must be strictly increasing");
  for (double b : weights_)
    if (!(b > 0.0)) throw std::invalid_argument("GeneralizedBoole: weights must be positive");

  guards_.resize(poles_.size());
  for (std::size_t k = 0; k < poles_.size(); ++k) {
    // Local pole spacing; isolated poles fall back to unit spacing.
    double spacing = std::numeric_limits<double>::infinity();
    if (k > 0) spacing = std::min(spacing, poles_[k] - poles_[k - 1]);
    if (k + 1 < poles_.size()) spacing = std::min(spacing, poles_[k + 1] - poles_[k]);
    if (!std::isfinite(spacing)) spacing = 1.0;
    guards_[k] = kGuardScale * spacing;
  }
  for (std::size_t k = 0; k < poles_.size(); ++k) {
    weight_sum_ += weights_[k];
    rho_mass_ += weights_[k] / (1.0 + poles_[k] * poles_[k]);
    max_abs_pole_ = std::max(max_abs_pole_, std::fabs(poles_[k]));
  }
}

bool GeneralizedBoole::near_pole(double x) const {
  for (std::size_t k = 0; k < poles_.size(); ++k)
    if (std::fabs(x - poles_[k]) < guards_[k]) return true;
  return false;
}

Interval GeneralizedBoole::branch_interval(int index) const {
  const double inf = std::numeric_limits<double>::infinity();
  int n = degree();
  if (index < 0 || index > n) throw std::invalid_argument("branch_interval: no such branch");
  double lo = (index == 0) ? -inf : poles_[index - 1];
  double hi = (index == n) ? inf : poles_[index];
  return Interval(lo, hi);
}

int GeneralizedBoole::branch_of(double x) const {
  int i = 0;
  while (i < degree() && x > poles_[i]) ++i;
  return i;
}

double GeneralizedBoole::inverse_on_branch(int index, double y) const {
  if (!std::isfinite(y)) throw std::invalid_argument("inverse_on_branch: y must be finite");
  Interval branch = branch_interval(index);
  int n = degree();
  double total = weight_sum_;

  // Bracket [lo, hi] with T(lo) < y < T(hi). T is an increasing bijection of
  // the branch onto the line; near a finite endpoint (a pole) it diverges, so
  // the bracket endpoint is pulled toward the pole until the sign flips. For
  // the unbounded parabolic ends, |T(x) - x| <= total weight once the poles
  // are at distance >= 1.
  double lo, hi;
  if (index == 0) {
    lo = std::min(y - total - 1.0, poles_.front() - 1.0);
  } else {
    double gap = branch.hi - branch.lo;
    if (!std::isfinite(gap)) gap = 1.0;
    double step = 0.25 * std::min(gap, 1.0);
    lo = branch.lo + step;
    while (eval(lo) >= y) {
      step *= 0.25;
      lo = branch.lo + step;
      if (step < 1e-300) throw NonConvergence("inverse_on_branch: bracket collapse at left end");
    }
  }
  if (index == n) {
    hi = std::max(y + total + 1.0, poles_.back() + 1.0);
  } else {
    double gap = branch.hi - branch.lo;
    if (!std::isfinite(gap)) gap = 1.0;
    double step = 0.25 * std::min(gap, 1.0);
    hi = branch.hi - step;
    while (eval(hi) <= y) {
      step *= 0.25;
      hi = branch.hi - step;
      if (step < 1e-300) throw NonConvergence("inverse_on_branch: bracket collapse at right end");
    }
  }

  double tol = 1e-14 * std::max(1.0, std::fabs(y));
  int iter = 0;
  while (hi - lo > tol) {
    if (++iter > kMaxBisection) throw NonConvergence("inverse_on_branch: bisection cap");
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket already at machine resolution
    (eval(mid) < y ? lo : hi) = mid;
  }

  double x = 0.5 * (lo + hi);
  for (int polish = 0; polish < 2; ++polish) {
    double step = (eval(x) - y) / derivative(x);
    double next = x - step;
    if (next > lo && next < hi) x = next;
  }
  return x;
}

std::vector<double> GeneralizedBoole::backward_parabolic_orbit(int side, int count) const {
  if (side != 1 && side != -1)
    throw std::invalid_argument("backward_parabolic_orbit: side must be +1 or -1");
  if (count < 1 || count > kBackwardOrbitCap)
    throw std::invalid_argument("backward_parabolic_orbit: bad count");
  int branch = (side > 0) ? degree() : 0;
  std::vector<double> orbit;
  orbit.reserve(count);
  orbit.push_back(side > 0 ? poles_.back() : poles_.front());
  for (int i = 1; i < count; ++i) orbit.push_back(inverse_on_branch(branch, orbit.back()));
  return orbit;
}

Interval GeneralizedBoole::core_interval() const {
  double zplus = inverse_on_branch(degree(), 0.0);
  double zminus = inverse_on_branch(0, 0.0);
  return Interval(zminus, zplus);
}

BranchStructure make_branch_structure(const GeneralizedBoole& map, int depth,
                                      double guard_radius) {
  BranchStructure out;
  for (int i = 0; i < map.branch_count(); ++i)
    out.branches.push_back({map.branch_interval(i), map.branch_is_parabolic(i)});
  out.backward_plus = map.backward_parabolic_orbit(+1, depth);
  out.backward_minus = map.backward_parabolic_orbit(-1, depth);
  out.core = map.core_interval();
  out.guard_radius = guard_radius;
  return out;
}

bool CotangentMap::near_pole(double x) const {
  if (x == 0.0) return true;
  // Branch indices beyond the cutoff collapse into the singularity at 0.
  if (std::fabs(x) < 1.0 / (M_PI * static_cast<double>(kBranchCutoff))) return true;
  double k = std::round(1.0 / (M_PI * x));
  if (k == 0.0) return false;  // on a parabolic branch, no pole nearby
  double pole = 1.0 / (M_PI * k);
  double spacing = pole * pole * M_PI;  // |1/(k pi) - 1/((k+1) pi)| ~ 1/(k^2 pi)
  return std::fabs(x - pole) < 1e-12 * spacing;
}

Interval CotangentMap::hyperbolic_branch(std::int64_t k) const {
  if (k == 0 || std::llabs(k) > kBranchCutoff)
    throw std::invalid_argument("hyperbolic_branch: bad index");
  double a = 1.0 / ((static_cast<double>(k) + 1.0) * M_PI);
  double b = 1.0 / (static_cast<double>(k) * M_PI);
  return (a < b) ? Interval(a, b) : Interval(b, a);
}

double CotangentMap::inverse_on_hyperbolic(std::int64_t k, double y) const {
  if (k == 0 || std::llabs(k) > kBranchCutoff)
    throw std::invalid_argument("inverse_on_hyperbolic: bad index");
  // On branch k, u = 1/x runs over (k pi, (k+1) pi) and cot(u) = y at
  // u = k pi + (pi/2 - atan y).
  double u = static_cast<double>(k) * M_PI + (M_PI_2 - std::atan(y));
  return 1.0 / u;
}

Interval CotangentMap::parabolic_branch(int side) const {
  const double inf = std::numeric_limits<double>::infinity();
  if (side > 0) return Interval(1.0 / M_PI, inf);
  return Interval(-inf, -1.0 / M_PI);
}

double CotangentMap::inverse_on_parabolic(int side, double y) const {
  double u = (side > 0) ? (M_PI_2 - std::atan(y)) : (-M_PI_2 - std::atan(y));
  return 1.0 / u;
}

std::vector<double> CotangentMap::backward_parabolic_orbit(int side, int count) const {
  if (side != 1 && side != -1)
    throw std::invalid_argument("backward_parabolic_orbit: side must be +1 or -1");
  if (count < 1 || count > kBackwardOrbitCap)
    throw std::invalid_argument("backward_parabolic_orbit: bad count");
  std::vector<double> orbit;
  orbit.reserve(count);
  orbit.push_back(side > 0 ? 1.0 / M_PI : -1.0 / M_PI);
  for (int i = 1; i < count; ++i) orbit.push_back(inverse_on_parabolic(side, orbit.back()));
  return orbit;
}

Interval CotangentMap::core_interval() const { return Interval(-2.0 / M_PI, 2.0 / M_PI); }

}  // namespace booledyn
