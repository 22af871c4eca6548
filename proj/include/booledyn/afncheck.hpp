#ifndef BOOLEDYN_AFNCHECK_HPP
#define BOOLEDYN_AFNCHECK_HPP

#include <vector>

#include "booledyn/interval.hpp"
#include "booledyn/maps.hpp"

namespace booledyn {

// The conjugated system S = phi^-1 . T . phi on (-pi/2, pi/2), with
// phi(x) = p tan(x). For p large enough S is an AFN interval map: uniformly
// expanding away from +-pi/2, Adler-bounded, every branch onto, and with
// cubic (one-sided) parabolic behaviour at the endpoints.
class TanConjugated {
 public:
  TanConjugated(const GeneralizedBoole& map, double scale) : map_(&map), p_(scale) {}

  double scale() const { return p_; }

  double to_line(double x) const { return p_ * std::tan(x); }        // phi
  double from_line(double s) const { return std::atan(s / p_); }     // phi^-1

  double eval(double x) const { return from_line(map_->eval(to_line(x))); }

  // S'(x) = (p^2+s^2)/(p^2+T(s)^2) T'(s), s = phi(x).
  double derivative(double x) const;
  double second_derivative(double x) const;
  double derivative_at_line(double s) const;  // same, parameterized by s

  const GeneralizedBoole& map() const { return *map_; }

 private:
  const GeneralizedBoole* map_;
  double p_;
};

// Smallest conjugation scale certified by the sufficient condition of the
// AFN lemma: p^2/K (w^2+1) >= (alpha |w| + beta)^2 with alpha, beta from the
// Jensen bound (alpha = sqrt(R) z_max (1+1/R), beta = sqrt(R)(1+z_max^2/R)),
// then verified a posteriori on a grid of the core interval.
double choose_p(const GeneralizedBoole& map, double k_target, int grid_size = 10000);

struct AfnReport {
  double p = 0;                    // conjugation scale
  double expansion_core = 0;       // grid-min of S' over the conjugated core (the K certificate)
  double expansion_off_ends = 0;   // grid-min of S' off the parabolic end zones
  double adler_sup = 0;            // sup |S''|/(S')^2 on the grid
  int branch_count = 0;
  double exponent_fit_right = 0;   // |S(x)-x| ~ |x -+ pi/2|^(1+p_l) fits, expect 3
  double exponent_fit_left = 0;
  int parabolic_order = 2;         // p_l
  double alpha = 0.5;
  double beta = 0.5;
  double range_sweep_defect = 0;   // worst endpoint gap of the per-branch sweeps
};

AfnReport verify_afn(const GeneralizedBoole& map, double p, int grid_size);

// Distortion of the first-return system to the core interval D. Cylinders are
// enumerated by the branch word of T until return; each cylinder's ratio
// compares the pullback proportion of E with E's proportion of the cylinder's
// return image. Uniform bounds on these ratios are the Markov-distortion
// property of the return map.
struct DistortionReport {
  int depth = 0;
  long long cylinder_count = 0;
  long long skipped_unreachable = 0;  // cylinders whose image misses E
  double min_ratio = 0;
  double max_ratio = 0;
  double bound_estimate = 0;  // max(max_ratio, 1/min_ratio)
  double truncated_mass = 0;  // mu-mass of D not covered at the excursion cap
};

DistortionReport distortion_estimate(const GeneralizedBoole& map, int depth, const Interval& e,
                                     int rung_cap = 0);

}  // namespace booledyn

#endif
