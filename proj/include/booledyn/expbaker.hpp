#ifndef BOOLEDYN_EXPBAKER_HPP
#define BOOLEDYN_EXPBAKER_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "booledyn/maps.hpp"
#include "booledyn/rng.hpp"

namespace booledyn {

using complex = std::complex<double>;

// The entire family f(z) = z - P(e^-z) on the strip {-pi < Im z < pi}, with P
// normalized by P(0) = 0 and 1 + w P'(w) = (1-w)^n, so that f'(z) = (1-e^-z)^n
// and n = 1 is exactly f(z) = z + e^-z. The projection F(w) = w e^P(w) has a
// single critical point at w = 1 of multiplicity n.
class StripMap {
 public:
  explicit StripMap(int degree);

  int degree() const { return degree_; }
  // Coefficients of P by power; coeffs()[0] = 0.
  const std::vector<double>& coeffs() const { return coeffs_; }

  complex eval(complex z) const;
  complex derivative(complex z) const { return std::pow(1.0 - std::exp(-z), degree_); }
  // Same derivative through the polynomial, 1 + P'(e^-z) e^-z, for identity
  // checks.
  complex derivative_from_poly(complex z) const;

  // The two inverse branches fixing the Baker domain, degree 1 only. Branch 0
  // returns the preimage in the closed upper half-strip, branch 1 the lower.
  // Points within 1e-6 of the critical value 1 are rejected.
  complex inverse_branch(complex w, int bit) const;

 private:
  int degree_;
  std::vector<double> coeffs_;
};

// Binary itinerary with block structure: a block is a maximal run of equal
// symbols.
struct SymbolCode {
  std::vector<std::uint8_t> bits;

  std::size_t length() const { return bits.size(); }
  long long block_count() const;        // B_n
  long long last_block_length() const;  // L_n
  long long first_block_length() const;
};

// Code of a Boole orbit: c_0 = 0, and the symbol flips after every step whose
// orbit point lies in the changing zone [-1, 1]. Raises OrbitTruncated when
// the orbit hits a pole guard within the horizon.
SymbolCode code_from_boole_orbit(double x0, long long horizon);

struct BlockStatisticsResult {
  std::vector<long long> survival_m;      // dyadic first-block thresholds
  std::vector<double> survival_fraction;  // fraction of codes with first block >= m
  double h_slope = 0;                     // log-log slope of the survival fractions
  double b_ks = 0;   // KS of B_n/sqrt(n) against its half-normal scaling
  double l_ks = 0;   // KS of 1 - L_n/n against the arcsine law
  bool consistency_ok = true;  // B_n - 1 equals the occupation count, exactly
  long long resampled = 0;
};

BlockStatisticsResult block_statistics(long long samples, long long horizon,
                                       const SeededSampler& sampler, long long m_lo = 8,
                                       long long m_hi = 512);

struct Disk {
  complex center{10.0, 0.5};
  double radius = 0.25;
};

struct HairTrace {
  std::vector<double> diameters;     // cloud diameter after k pullbacks
  std::vector<double> partial_sums;  // cumulative diameter sums
  std::vector<complex> centers;      // cloud centroids
  double fitted_contraction = 0;     // K-hat from diam_k <= K^(-cbrt(k)) diam_0
  long long settled_index = -1;      // first k after which that inequality holds
};

// Pulls a 16-point boundary cloud of the disk through the inverse branches
// chosen by the code symbols, recording diameters and partial sums. Diameters
// are point-cloud estimates, not rigorous set images.
HairTrace hair_contraction(const StripMap& map, const SymbolCode& code, const Disk& seed,
                           int fit_burn_in = 32);

struct IdentityReport {
  double max_defect = 0;            // sup over the grid of |M(g(z)) - h(M(z))|, relative
  double value_at_zero_defect = 0;  // |g(0) - 1/3|
  double fixed_point_defect = 0;    // |g(1) - 1|
  double derivative_defect = 0;     // |g'(1) - 1|, finite differences
  double second_derivative_defect = 0;  // |g''(1)|, finite differences
  double cubic_ratio = 0;               // (g(1)-g(t))/(1-t)^3 as t -> 1
  long long grid_points = 0;
};

// Checks the boundary conjugacy algebra of the degree-2 Baker domain: the
// inner function g(z) = (3z^2+1)/(3+z^2), the half-plane model h(z) = z - 1/z
// and the Moebius bridge M(z) = i(1+z)/(1-z) satisfy M . g = h . M, and 1 is
// a cubic (doubly parabolic) fixed point of g. Raises IdentityViolation when
// a grid point exceeds `tol`.
IdentityReport inner_function_identities(int grid_size, double tol = 1e-12);

}  // namespace booledyn

#endif
