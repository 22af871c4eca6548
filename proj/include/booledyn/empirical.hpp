#ifndef BOOLEDYN_EMPIRICAL_HPP
#define BOOLEDYN_EMPIRICAL_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace booledyn {

// Reference laws of the alpha = beta = 1/2 limit theorems.
//
// half_normal_pi: CDF (2/pi) * integral_0^t exp(-y^2/pi) dy = erf(t/sqrt(pi)),
// the absolute-normal law normalized to unit mean.
inline double half_normal_pi_cdf(double t) {
  if (t <= 0.0) return 0.0;
  return std::erf(t / std::sqrt(M_PI));
}

// arcsine: CDF (2/pi) * asin(sqrt(t)) on [0,1].
inline double arcsine_cdf(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 2.0 / M_PI * std::asin(std::sqrt(t));
}

// Sorted sample with right-continuous empirical CDF and one-sample
// Kolmogorov-Smirnov distance against a reference CDF.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double cdf(double t) const;
  double quantile(double q) const;
  double mean() const;
  double median() const { return quantile(0.5); }

  double ks_distance(const std::function<double(double)>& reference_cdf) const;

 private:
  std::vector<double> values_;  // ascending
};

// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace booledyn

#endif
