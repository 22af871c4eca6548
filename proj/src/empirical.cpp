#include "booledyn/empirical.hpp"

#include <algorithm>
#include <stdexcept>

namespace booledyn {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double t) const {
  if (values_.empty()) throw std::logic_error("EmpiricalDistribution: empty sample");
  auto it = std::upper_bound(values_.begin(), values_.end(), t);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double q) const {
  if (values_.empty()) throw std::logic_error("EmpiricalDistribution: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  auto idx = static_cast<std::size_t>(q * static_cast<double>(values_.size() - 1));
  return values_[idx];
}

double EmpiricalDistribution::mean() const {
  if (values_.empty()) throw std::logic_error("EmpiricalDistribution: empty sample");
  double acc = 0.0;
  for (double v : values_) acc += v;
  return acc / static_cast<double>(values_.size());
}

double EmpiricalDistribution::ks_distance(
    const std::function<double(double)>& reference_cdf) const {
  if (values_.empty()) throw std::logic_error("EmpiricalDistribution: empty sample");
  double n = static_cast<double>(values_.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double f = reference_cdf(values_[i]);
    double lo = f - static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n - f;
    sup = std::max(sup, std::max(lo, hi));
  }
  return sup;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_slope: need matching samples, >= 2 points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace booledyn
