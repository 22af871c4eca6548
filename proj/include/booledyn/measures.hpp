#ifndef BOOLEDYN_MEASURES_HPP
#define BOOLEDYN_MEASURES_HPP

#include <vector>

#include "booledyn/interval.hpp"
#include "booledyn/rng.hpp"

namespace booledyn {

// The two reference measures on the line: lambda, the probability law used to
// sample initial conditions and measure sets (standard Cauchy: the pushforward
// of normalized circle measure under the Moebius map fixed so its density is
// 1/(pi(1+x^2))), and mu, plain Lebesgue, the sigma-finite invariant measure.
struct CauchyLaw {
  static double density(double x) { return 1.0 / (M_PI * (1.0 + x * x)); }
  static double cdf(double x) { return 0.5 + std::atan(x) / M_PI; }
  static double sample(RandomStream& rs) { return rs.cauchy(); }
};

// lambda((a,b]) = (atan b - atan a)/pi; endpoints may be +-infinity.
double lambda_interval(double a, double b);
inline double lambda_interval(const Interval& e) { return lambda_interval(e.lo, e.hi); }

// mu((a,b)) = b - a for finite endpoints.
double mu_interval(double a, double b);
inline double mu_interval(const Interval& e) { return mu_interval(e.lo, e.hi); }

// count i.i.d. Cauchy draws from the stream at `index` of the sampler.
std::vector<double> sample_lambda(const SeededSampler& sampler, std::uint64_t index,
                                  std::size_t count);

}  // namespace booledyn

#endif
