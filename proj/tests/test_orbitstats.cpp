#include <doctest.h>

#include <cmath>

#include "booledyn/circle_model.hpp"
#include "booledyn/measures.hpp"
#include "booledyn/orbitstats.hpp"

using namespace booledyn;

namespace {
const Interval kCore(-1.0, 1.0);
}

TEST_SUITE_BEGIN("orbitstats");

TEST_CASE("single orbit statistics") {
  GeneralizedBoole boole = GeneralizedBoole::boole();

  // T(1) = 0 is the pole: the orbit truncates after one recorded point.
  OrbitStatistics hit = simulate_orbit(boole, 1.0, kCore, 10);
  CHECK(hit.truncated);
  CHECK(hit.occupation == 1);
  CHECK(hit.steps_completed == 1);

  // 2 -> 1.5 -> 0.8333...: only the third point is inside [-1,1].
  OrbitStatistics three = simulate_orbit(boole, 2.0, kCore, 3);
  CHECK_FALSE(three.truncated);
  CHECK(three.occupation == 1);
  CHECK(three.last_visit == 3);
  CHECK(three.entry_time == 2);

  OrbitStatistics one = simulate_orbit(boole, 0.5, kCore, 1);
  CHECK(one.occupation == 1);
  CHECK(one.last_visit == 1);

  CHECK_THROWS_AS(simulate_orbit(boole, 0.5, kCore, 0), std::invalid_argument);
}

TEST_CASE("single-pass consistency on a long orbit") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  OrbitStatistics st = simulate_orbit(boole, std::sqrt(2.0) + 0.1234, kCore, 20000);
  REQUIRE_FALSE(st.truncated);

  // Recompute the visit pattern directly.
  double x = std::sqrt(2.0) + 0.1234;
  long long occupation = 0, last = 0;
  for (long long k = 0; k < 20000; ++k) {
    if (kCore.contains(x)) {
      ++occupation;
      last = k + 1;
    }
    x = boole.eval(x);
  }
  CHECK(st.occupation == occupation);
  CHECK(st.last_visit == last);
  CHECK(st.occupation == static_cast<long long>(st.return_times.size()) + 1);
}

TEST_CASE("monotone coupling between nested targets") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  Interval wide(-2.0, 2.0);
  RandomStream rs = SeededSampler(21).stream(0);
  for (int i = 0; i < 25; ++i) {
    double x0 = rs.cauchy();
    OrbitStatistics small = simulate_orbit(boole, x0, kCore, 3000);
    OrbitStatistics large = simulate_orbit(boole, x0, wide, 3000);
    if (small.truncated || large.truncated) continue;
    CHECK(small.occupation <= large.occupation);
    if (kCore.contains(x0) && !small.return_times.empty() && !large.return_times.empty())
      CHECK(large.return_times.front() <= small.return_times.front());
  }
}

TEST_CASE("occupation growth table") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(31);

  OccupationGrowthResult empty =
      occupation_growth(boole, kCore, 1.0 / 6.0, {100, 1000}, 0, sampler);
  CHECK(empty.rows.empty());

  OccupationGrowthResult growth =
      occupation_growth(boole, kCore, 1.0 / 6.0, {1000, 10000, 100000}, 400, sampler);
  REQUIRE(growth.rows.size() == 3);
  CHECK(growth.rows[0].q10 < growth.rows[1].q10);
  CHECK(growth.rows[1].q10 < growth.rows[2].q10);
  CHECK(growth.rows[0].q50 < growth.rows[0].q90);

  CHECK_THROWS_AS(occupation_growth(boole, kCore, 0.7, {10}, 1, sampler),
                  std::invalid_argument);
  CHECK_THROWS_AS(occupation_growth(boole, kCore, 0.1, {100, 50}, 1, sampler),
                  std::invalid_argument);
}

TEST_CASE("return-time histogram against interval arithmetic") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(37);
  ReturnTailResult tail = return_time_tail(boole, kCore, 200000, sampler, 8, 128);

  // Partition: every conditioned sample returned or was censored.
  long long total = tail.censored;
  for (long long c : tail.histogram) total += c;
  CHECK(total == tail.samples);

  // lambda{x in E: T(x) in E} by branch-inverse interval arithmetic.
  double oracle = 0.0;
  for (int b = 0; b < boole.branch_count(); ++b) {
    double lo = boole.inverse_on_branch(b, kCore.lo);
    double hi = boole.inverse_on_branch(b, kCore.hi);
    double clipped_lo = std::max(lo, kCore.lo), clipped_hi = std::min(hi, kCore.hi);
    if (clipped_lo < clipped_hi) oracle += lambda_interval(clipped_lo, clipped_hi);
  }
  CHECK(oracle == doctest::Approx(0.1476).epsilon(1e-2));
  CHECK(tail.lambda_first > 0.1);
  CHECK(tail.lambda_first == doctest::Approx(oracle).epsilon(0.05));

  // Insufficient events in the reported bins must raise.
  CHECK_THROWS_AS(return_time_tail(boole, kCore, 200, sampler, 8, 512),
                  InsufficientSamples);
}

TEST_CASE("return-tail slope is scale invariant across comparable targets") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(41);
  ReturnTailResult small = return_time_tail(boole, kCore, 300000, sampler, 8, 256);
  ReturnTailResult large =
      return_time_tail(boole, Interval(-2.0, 2.0), 300000, sampler.fork("wide"), 8, 256);
  CHECK(std::fabs(small.slope - large.slope) <= 0.1);
}

TEST_CASE("exact escape tail") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  EscapeTailResult tail = escape_time_tail(boole, 10000, 100, 10000);

  CHECK(std::fabs(tail.first_mass - 0.5) <= 1e-15);
  CHECK(tail.slope >= -0.55);
  CHECK(tail.slope <= -0.45);

  // sqrt(n) lambda(F_n) approaches 2/(pi sqrt 2) = sqrt(2)/pi.
  CHECK(tail.sqrt_scaled.back() == doctest::Approx(std::sqrt(2.0) / M_PI).epsilon(0.01));
  double at_1e3 = 0, at_1e4 = 0;
  for (std::size_t i = 0; i < tail.n_values.size(); ++i) {
    if (tail.n_values[i] == 1000) at_1e3 = tail.sqrt_scaled[i];
    if (tail.n_values[i] == 10000) at_1e4 = tail.sqrt_scaled[i];
  }
  CHECK(std::fabs(at_1e4 / at_1e3 - 1.0) < 0.05);
}

TEST_CASE("darling-kac mechanics") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(47);
  CHECK_THROWS_AS(darling_kac(boole, kCore, 0, 10, sampler), std::invalid_argument);

  DistributionResult dk = darling_kac(boole, kCore, 100000, 1000, sampler);
  for (double v : dk.dist.values()) CHECK(v >= 0.0);
  CHECK(dk.ks >= 0.0);
  CHECK(dk.ks <= 0.1);  // coarse smoke bound; the calibrated one is in acceptance

  // Determinism under the seed.
  DistributionResult again = darling_kac(boole, kCore, 100000, 1000, sampler);
  CHECK(again.ks == dk.ks);
  CHECK(again.dist.values() == dk.dist.values());
}

TEST_CASE("arcsine occupation symmetry between the two sides") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(53);
  DistributionResult plus = arcsine_occupation(boole, +1, 20000, 4000, sampler);
  DistributionResult minus = arcsine_occupation(boole, -1, 20000, 4000, sampler.fork("m"));

  CHECK(plus.dist.mean() == doctest::Approx(0.5).epsilon(0.06));
  for (double v : plus.dist.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  // Two-sample KS between the sides; the map is odd so the laws coincide.
  double sup = 0.0;
  for (double t = 0.0; t <= 1.0; t += 0.01)
    sup = std::max(sup, std::fabs(plus.dist.cdf(t) - minus.dist.cdf(t)));
  CHECK(sup <= 0.05);
}

TEST_CASE("arcsine last-visit basics") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(59);
  DistributionResult law = arcsine_last_visit(boole, kCore, 20000, 2000, sampler);
  for (double v : law.dist.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(law.dist.median() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("wandering rate") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(61);
  WanderingRateResult rate = wandering_rate(boole, kCore, 1000, 20000, sampler);

  CHECK(rate.w[1] == doctest::Approx(2.0).epsilon(1e-12));  // w_1 = mu(E)
  for (std::size_t n = 1; n < rate.w.size(); ++n) CHECK(rate.w[n] >= rate.w[n - 1]);

  // w_n ~ 2 sqrt(2n): the scaled value should be near 2 sqrt 2 already.
  double scaled = rate.w[1000] / std::sqrt(1000.0);
  CHECK(scaled == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("hopf ratios") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  SeededSampler sampler(67);

  // E = F forces every ratio to one.
  HopfRatioResult same = hopf_ratio(boole, kCore, kCore, 2000, 50, sampler);
  for (double r : same.ratios.values()) CHECK(r == 1.0);

  // E inside F keeps every ratio at most one.
  HopfRatioResult nested = hopf_ratio(boole, Interval(0.0, 1.0), kCore, 2000, 50, sampler);
  for (double r : nested.ratios.values()) CHECK(r <= 1.0);

  // Hopf limit mu(E)/mu(F) = 2 at a modest horizon.
  HopfRatioResult ratio =
      hopf_ratio(boole, kCore, Interval(0.0, 1.0), 200000, 200, sampler.fork("main"));
  CHECK(ratio.median == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("circle model: exact decay and the Kac identity") {
  SeededSampler sampler(71);
  CircleModelResult model =
      circle_model_checks(2, 0.0, 0.5, 10000, 200, sampler, 1000, 100000, 0.1);

  // The survival arc halves exactly each step.
  CHECK(std::fabs(model.decay_rate - 0.5) <= 1e-12);
  CHECK(model.survival_mass[0] == doctest::Approx(0.2));
  CHECK(model.survival_mass[3] == doctest::Approx(0.2 / 8.0));

  CHECK(model.birkhoff_error <= 0.01);

  // Kac's lemma: sum_n n lambda(E_n) equals lambda of the whole circle, 1.
  CHECK(model.kac_sum == doctest::Approx(1.0).epsilon(0.02));

  // Same identity for a different degree and arc.
  CircleModelResult model3 =
      circle_model_checks(3, 1.0 / 3.0, 2.0 / 3.0, 10000, 200, sampler.fork("d3"), 1000,
                          100000, 0.1);
  CHECK(model3.kac_sum == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(model3.decay_rate - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("digit orbit statistics do not collapse") {
  // A floating-point doubling orbit collapses onto the fixed point within 53
  // steps; the digit-driven orbit must keep mixing.
  SeededSampler sampler(73);
  DigitOrbit orbit(2, sampler.stream(0));
  long long visits = 0;
  const long long horizon = 200000;
  for (long long k = 0; k < horizon; ++k) {
    if (orbit.in_arc(0.25, 0.75)) ++visits;
    orbit.step();
  }
  double fraction = static_cast<double>(visits) / horizon;
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.02));
}

TEST_SUITE_END();
