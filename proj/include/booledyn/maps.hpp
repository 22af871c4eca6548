#ifndef BOOLEDYN_MAPS_HPP
#define BOOLEDYN_MAPS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "booledyn/interval.hpp"

namespace booledyn {

// Generalized Boole transformation
//
//   T(x) = x - b_1/(x - a_1) - ... - b_n/(x - a_n),   b_k > 0, a_1 < ... < a_n.
//
// These are the boundary extensions of the finite-degree doubly parabolic
// inner functions of the upper half-plane. T' > 1 off the poles, every branch
// is an increasing bijection onto the line, Lebesgue measure is invariant,
// and +-infinity is a two-petal parabolic fixed point with T(x) = x - c/x + ...
// where c = sum of the weights. The classical Boole map x - 1/x is n = 1.
class GeneralizedBoole {
 public:
  GeneralizedBoole(std::vector<double> poles, std::vector<double> weights);

  // T(x) = x - 1/x.
  static GeneralizedBoole boole() { return GeneralizedBoole({0.0}, {1.0}); }

  const std::vector<double>& poles() const { return poles_; }
  const std::vector<double>& weights() const { return weights_; }
  int degree() const { return static_cast<int>(poles_.size()); }

  // Sum of weights: the parabolic coefficient c in T(x) = x - c/x + O(1/x^3).
  double weight_sum() const { return weight_sum_; }
  // Total mass of the representing point measure: sum b_k / (1 + a_k^2).
  double rho_mass() const { return rho_mass_; }
  double max_abs_pole() const { return max_abs_pole_; }

  // True when x sits inside the pole guard delta_k = 1e-12 * (local pole
  // spacing); orbits reaching a guard are treated as truncated.
  bool near_pole(double x) const;

  // Plain evaluation, no pole guard (caller guarantees x off the poles).
  double eval(double x) const {
    double acc = x;
    for (std::size_t k = 0; k < poles_.size(); ++k) acc -= weights_[k] / (x - poles_[k]);
    return acc;
  }

  // Evaluation with the pole guard; NaN signals a pole hit. The hot path for
  // orbit iteration.
  double eval_guarded(double x) const {
    double acc = x;
    for (std::size_t k = 0; k < poles_.size(); ++k) {
      double dx = x - poles_[k];
      if (std::fabs(dx) < guards_[k]) return std::numeric_limits<double>::quiet_NaN();
      acc -= weights_[k] / dx;
    }
    return acc;
  }

  std::optional<double> eval_checked(double x) const {
    double y = eval_guarded(x);
    if (std::isnan(y)) return std::nullopt;
    return y;
  }

  // One orbit step for a point already known to be off the guards; NaN when
  // the produced point lands inside a pole guard (the orbit truncates before
  // recording it).
  double next_point(double x) const {
    double y = eval(x);
    return near_pole(y) ? std::numeric_limits<double>::quiet_NaN() : y;
  }

  // T'(x) = 1 + sum b_k/(x-a_k)^2 > 1.
  double derivative(double x) const {
    double acc = 1.0;
    for (std::size_t k = 0; k < poles_.size(); ++k) {
      double dx = x - poles_[k];
      acc += weights_[k] / (dx * dx);
    }
    return acc;
  }

  // T''(x) = -2 sum b_k/(x-a_k)^3.
  double second_derivative(double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < poles_.size(); ++k) {
      double dx = x - poles_[k];
      acc -= 2.0 * weights_[k] / (dx * dx * dx);
    }
    return acc;
  }

  // Branches are indexed left to right: 0 is (-inf, a_1), k is (a_k, a_{k+1}),
  // n is (a_n, +inf). The two unbounded ones are the parabolic branches.
  int branch_count() const { return degree() + 1; }
  Interval branch_interval(int index) const;
  bool branch_is_parabolic(int index) const { return index == 0 || index == degree(); }
  int branch_of(double x) const;

  // Unique x in branch `index` with T(x) = y. Bracketed bisection to width
  // 1e-14 * max(1,|y|), then two Newton polishing steps.
  double inverse_on_branch(int index, double y) const;

  // Backward orbit of the extreme pole along a parabolic branch:
  // out[0] = a_n (side +1) or a_1 (side -1), T(out[i+1]) = out[i]. out[1] is
  // the extreme preimage of zero, and out[i] ~ sqrt(2 c i) for large i.
  std::vector<double> backward_parabolic_orbit(int side, int count) const;

  // D = (z^-, z^+), the span between the extreme preimages of zero. Contains
  // every pole.
  Interval core_interval() const;

 private:
  std::vector<double> poles_;
  std::vector<double> weights_;
  std::vector<double> guards_;
  double weight_sum_ = 0.0;
  double rho_mass_ = 0.0;
  double max_abs_pole_ = 0.0;
};

// The structure of a map around its parabolic point at infinity: tagged
// branches, the backward parabolic orbits p_n^+- and the core interval.
struct BranchStructure {
  struct Branch {
    Interval domain;
    bool parabolic = false;
  };
  std::vector<Branch> branches;
  std::vector<double> backward_plus;   // increasing, starts at the rightmost pole
  std::vector<double> backward_minus;  // decreasing, starts at the leftmost pole
  Interval core;                       // (z^-, z^+)
  double guard_radius = 0.0;           // r used for the excluded zone D_r
};

BranchStructure make_branch_structure(const GeneralizedBoole& map, int depth,
                                      double guard_radius);

// The infinite-degree example T(x) = cot(1/x) = 1/tan(1/x): singularity at 0,
// poles at 1/(k pi), parabolic branches beyond +-1/pi, and T(x) = x - 1/(3x)
// + ... at infinity. Hyperbolic branch k (k >= 1) is (1/((k+1)pi), 1/(k pi)),
// mirrored for k <= -1. Branch indices with |k| above the cutoff are treated
// as pole-guard territory; their total lambda-mass is below 1e-6.
class CotangentMap {
 public:
  static constexpr std::int64_t kBranchCutoff = 1000000;

  double eval(double x) const { return 1.0 / std::tan(1.0 / x); }

  double eval_guarded(double x) const {
    if (near_pole(x)) return std::numeric_limits<double>::quiet_NaN();
    return eval(x);
  }

  std::optional<double> eval_checked(double x) const {
    double y = eval_guarded(x);
    if (std::isnan(y)) return std::nullopt;
    return y;
  }

  double next_point(double x) const {
    double y = eval(x);
    return near_pole(y) ? std::numeric_limits<double>::quiet_NaN() : y;
  }

  // T'(x) = csc^2(1/x)/x^2 >= 1, with equality only in the parabolic limit.
  double derivative(double x) const {
    double s = std::sin(1.0 / x);
    return 1.0 / (s * s * x * x);
  }

  double second_derivative(double x) const {
    // T'' = (2 csc^2 u / x^3)(cot u / x - 1), u = 1/x.
    double u = 1.0 / x;
    double s = std::sin(u);
    double csc2 = 1.0 / (s * s);
    return 2.0 * csc2 / (x * x * x) * (std::cos(u) / (s * x) - 1.0);
  }

  bool near_pole(double x) const;

  // Hyperbolic branch k, |k| in [1, cutoff]; closed-form inverse.
  Interval hyperbolic_branch(std::int64_t k) const;
  double inverse_on_hyperbolic(std::int64_t k, double y) const;

  // Parabolic branch on side +1: (1/pi, +inf); side -1: (-inf, -1/pi).
  Interval parabolic_branch(int side) const;
  double inverse_on_parabolic(int side, double y) const;

  std::vector<double> backward_parabolic_orbit(int side, int count) const;
  Interval core_interval() const;  // (-2/pi, 2/pi)
};

}  // namespace booledyn

#endif
