#include "booledyn/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace booledyn {

double lambda_interval(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || !(a <= b))
    throw std::invalid_argument("lambda_interval: need a <= b");
  return (std::atan(b) - std::atan(a)) / M_PI;
}

double mu_interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a <= b))
    throw std::invalid_argument("mu_interval: need finite a <= b");
  return b - a;
}

std::vector<double> sample_lambda(const SeededSampler& sampler, std::uint64_t index,
                                  std::size_t count) {
  RandomStream rs = sampler.stream(index);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(rs.cauchy());
  return out;
}

}  // namespace booledyn
