#ifndef BOOLEDYN_CIRCLE_MODEL_HPP
#define BOOLEDYN_CIRCLE_MODEL_HPP

#include <cstdint>
#include <vector>

#include "booledyn/rng.hpp"

namespace booledyn {

// The boundary model of z -> z^d: angle d-tupling theta -> d*theta mod 1.
//
// Iterating theta *= d in floating point is useless here (binary expansions
// shift out and every double collapses onto the fixed point), so the orbit is
// driven by the base-d digit expansion of a random point instead: the state is
// an integer V in [0, d^J) standing for the leading J digits, one fresh digit
// enters per step. This is an exact simulation of the map on a d^-J grid.
class DigitOrbit {
 public:
  DigitOrbit(int d, RandomStream stream);

  // Start uniformly on the circle.
  void seed_uniform();
  // Start uniformly on the arc [lo, hi) (up to grid resolution).
  void seed_uniform_on(double lo, double hi);

  double point() const { return static_cast<double>(value_) / modulus_double_; }
  bool in_arc(double lo, double hi) const {
    double p = point();
    return p >= lo && p < hi;
  }
  void step() { value_ = (value_ % top_divisor_) * base_ + stream_.below(base_); }

 private:
  std::uint64_t base_;
  std::uint64_t modulus_;      // d^J, largest power of d below 2^63
  std::uint64_t top_divisor_;  // d^(J-1)
  double modulus_double_;
  std::uint64_t value_ = 0;
  RandomStream stream_;
};

struct CircleModelResult {
  double arc_mass = 0;         // lambda(E), exact
  double birkhoff_error = 0;   // |mean(S_n(E)/n) - lambda(E)|
  double kac_sum = 0;          // sum over n of n * lambda-mass{x in E : tau = n}
  long long kac_censored = 0;  // returns beyond the tracked range
  double decay_rate = 0;       // fitted geometric rate of the survival arcs
  std::vector<double> survival_mass;  // lambda(G_n) for the arc at the fixed point
};

// Appendix-style finite-measure checks for the d-tupling model: Birkhoff
// averages over the arc E = [lo, hi), the return-time sum of Kac's lemma
// (estimated by uniform sampling on E), and the exact geometric decay of the
// survival arcs G_n around the fixed point 0, G = (-g_halfwidth, g_halfwidth).
CircleModelResult circle_model_checks(int d, double arc_lo, double arc_hi,
                                      long long birkhoff_horizon, long long birkhoff_samples,
                                      const SeededSampler& sampler, long long kac_n_max,
                                      long long kac_samples, double g_halfwidth,
                                      int g_depth = 20);

}  // namespace booledyn

#endif
