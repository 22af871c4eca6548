#include <doctest.h>

#include <cmath>

#include "booledyn/empirical.hpp"
#include "booledyn/measures.hpp"

using namespace booledyn;

TEST_SUITE_BEGIN("measures");

TEST_CASE("lambda of intervals") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(lambda_interval(-inf, inf) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambda_interval(-1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  // Tail mass beyond +-sqrt(n) at n = 100: (pi - 2 atan 10)/pi.
  double tails = lambda_interval(-inf, -10.0) + lambda_interval(10.0, inf);
  CHECK(tails == doctest::Approx((M_PI - 2.0 * std::atan(10.0)) / M_PI).epsilon(1e-14));
  CHECK(tails == doctest::Approx(0.06345).epsilon(1e-3));
}

TEST_CASE("lambda additivity and monotonicity") {
  CHECK(lambda_interval(-2.0, 0.5) ==
        doctest::Approx(lambda_interval(-2.0, -0.3) + lambda_interval(-0.3, 0.5))
            .epsilon(1e-15));
  CHECK(lambda_interval(-1.0, 1.0) > lambda_interval(-0.5, 0.5));
  CHECK_THROWS_AS(lambda_interval(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("mu of intervals") {
  CHECK(mu_interval(0.0, 1.0) == 1.0);
  CHECK(mu_interval(-1.0, 1.0) == 2.0);  // the Boole core interval
  CHECK_THROWS_AS(mu_interval(0.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("sampling determinism and independence across counters") {
  SeededSampler sampler(42);
  auto a = sample_lambda(sampler, 3, 100);
  auto b = sample_lambda(sampler, 3, 100);
  auto c = sample_lambda(sampler, 4, 100);
  CHECK(a == b);
  CHECK(a != c);

  SeededSampler other(43);
  CHECK(sample_lambda(other, 3, 100) != a);
}

TEST_CASE("lambda sampler matches the arctangent law") {
  SeededSampler sampler(2024);
  auto values = sample_lambda(sampler, 0, 100000);
  EmpiricalDistribution dist(values);

  CHECK(dist.ks_distance([](double t) { return CauchyLaw::cdf(t); }) <= 0.01);
  CHECK(std::fabs(dist.median()) <= 0.02);

  long long inside = 0;
  for (double v : values)
    if (v >= -1.0 && v <= 1.0) ++inside;
  double fraction = static_cast<double>(inside) / values.size();
  CHECK(std::fabs(fraction - lambda_interval(-1.0, 1.0)) <= 0.01);
}

TEST_CASE("ks distance is scale-correct against own samples") {
  // Half-normal reference samples against the half-normal CDF.
  SeededSampler sampler(7);
  RandomStream rs = sampler.stream(0);
  std::vector<double> values;
  double sigma = std::sqrt(M_PI / 2.0);
  for (int i = 0; i < 10000; ++i) values.push_back(std::fabs(sigma * rs.normal()));
  EmpiricalDistribution dist(std::move(values));
  CHECK(dist.ks_distance(half_normal_pi_cdf) <= 0.02);
}

TEST_CASE("reference CDFs are monotone 0 to 1") {
  CHECK(half_normal_pi_cdf(-1.0) == 0.0);
  CHECK(half_normal_pi_cdf(50.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(arcsine_cdf(0.0) == 0.0);
  CHECK(arcsine_cdf(1.0) == 1.0);
  CHECK(arcsine_cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double t = 0.0; t < 1.0; t += 0.05) CHECK(arcsine_cdf(t + 0.05) >= arcsine_cdf(t));
}

TEST_SUITE_END();
