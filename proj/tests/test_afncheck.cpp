#include <doctest.h>

#include <cmath>

#include "booledyn/afncheck.hpp"
#include "booledyn/errors.hpp"
#include "booledyn/rng.hpp"

using namespace booledyn;

namespace {
GeneralizedBoole gb4() { return GeneralizedBoole({-2.0, -1.0, 1.0, 2.0}, {1.0, 1.0, 1.0, 1.0}); }
}

TEST_SUITE_BEGIN("afncheck");

TEST_CASE("conjugation scale for the Boole map") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  double p = choose_p(boole, 1.5);
  CHECK(std::isfinite(p));
  // alpha = beta = 2 for Boole, so the sufficient condition gives sqrt(12).
  CHECK(p == doctest::Approx(std::sqrt(12.0)).epsilon(1e-12));

  TanConjugated conj(boole, p);
  Interval core = boole.core_interval();
  double min_deriv = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 10000; ++i) {
    double s = core.lo + core.length() * i / 10000;
    if (boole.near_pole(s)) continue;
    min_deriv = std::min(min_deriv, conj.derivative_at_line(s));
  }
  CHECK(min_deriv >= 1.5);

  // Doubling the expansion target can only enlarge the certified scale.
  CHECK(choose_p(boole, 1.9) > p);
}

TEST_CASE("expansion holds off the core for any scale") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  for (double p : {1.5, 3.0, 10.0}) {
    TanConjugated conj(boole, p);
    for (double s : {1.1, 2.0, 5.0, 40.0, -1.3, -7.0}) {
      CHECK(conj.derivative_at_line(s) > 1.0);
    }
  }
}

TEST_CASE("certificate stays valid as the scale grows") {
  // The grid minimum itself decreases towards min T' on D as p grows, but the
  // certified bound keeps holding for every larger scale.
  GeneralizedBoole boole = GeneralizedBoole::boole();
  double p = choose_p(boole, 1.5);
  Interval core = boole.core_interval();
  for (double scale : {1.0, 2.0, 4.0}) {
    TanConjugated conj(boole, p * scale);
    double min_deriv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 4000; ++i) {
      double s = core.lo + core.length() * i / 4000;
      if (boole.near_pole(s)) continue;
      min_deriv = std::min(min_deriv, conj.derivative_at_line(s));
    }
    CHECK(min_deriv >= 1.5);
  }
}

TEST_CASE("conjugacy identity and invariance of the interval") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  double p = choose_p(boole, 1.5);
  TanConjugated conj(boole, p);
  RandomStream rs = SeededSampler(83).stream(0);
  for (int i = 0; i < 400; ++i) {
    double x = rs.uniform(-M_PI_2 + 1e-3, M_PI_2 - 1e-3);
    double s = conj.to_line(x);
    if (boole.near_pole(s) || boole.near_pole(conj.eval(x)) /* pole preimage */) continue;
    double lhs = conj.to_line(conj.eval(x));
    double rhs = boole.eval(s);
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));

    CHECK(conj.eval(x) > -M_PI_2);
    CHECK(conj.eval(x) < M_PI_2);
  }
}

TEST_CASE("AFN report for the Boole map") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  double p = choose_p(boole, 1.5);
  AfnReport report = verify_afn(boole, p, 10000);

  CHECK(report.expansion_core >= 1.5);
  CHECK(report.expansion_off_ends > 1.0);
  CHECK(std::isfinite(report.adler_sup));
  CHECK(report.branch_count == 2);
  CHECK(report.exponent_fit_right == doctest::Approx(3.0).epsilon(0.2 / 3.0));
  CHECK(report.exponent_fit_left == doctest::Approx(3.0).epsilon(0.2 / 3.0));
  CHECK(report.parabolic_order == 2);
  CHECK(report.alpha == 0.5);
  CHECK(report.beta == 0.5);
  CHECK(report.range_sweep_defect < 1e-2);

  AfnReport fine = verify_afn(boole, p, 100000);
  CHECK(std::fabs(fine.adler_sup / report.adler_sup - 1.0) <= 0.10);
}

TEST_CASE("AFN report for the four-pole map") {
  GeneralizedBoole map = gb4();
  double p = choose_p(map, 1.2);
  AfnReport report = verify_afn(map, p, 20000);
  CHECK(report.branch_count == 5);
  CHECK(report.expansion_core >= 1.2);
  CHECK(report.exponent_fit_right == doctest::Approx(3.0).epsilon(0.2 / 3.0));
}

TEST_CASE("distortion ratios are exactly one for full targets") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  Interval core = boole.core_interval();

  DistortionReport full = distortion_estimate(boole, 1, core, 200);
  CHECK(full.bound_estimate == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(full.cylinder_count == 2 * (200 + 1));
  CHECK(full.truncated_mass > 0.0);
  CHECK(full.truncated_mass < 0.1);

  // (0,1) is the full return image of the reachable cylinders.
  DistortionReport half = distortion_estimate(boole, 1, Interval(0.0, 1.0), 200);
  CHECK(half.bound_estimate == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(half.skipped_unreachable > 0);
}

TEST_CASE("distortion bound is finite and stable in depth") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  Interval e(0.0, 0.5);
  DistortionReport d1 = distortion_estimate(boole, 1, e, 14);
  DistortionReport d3 = distortion_estimate(boole, 3, e, 14);
  DistortionReport d4 = distortion_estimate(boole, 4, e, 14);

  CHECK(d1.min_ratio > 0.0);
  CHECK(d1.max_ratio < 10.0);
  CHECK(d3.bound_estimate >= 1.0);
  CHECK(d4.bound_estimate / d3.bound_estimate - 1.0 < 0.5);

  CHECK_THROWS_AS(distortion_estimate(boole, 5, e, 40), CylinderOverflow);
  CHECK_THROWS_AS(distortion_estimate(boole, 0, e, 10), std::invalid_argument);
  CHECK_THROWS_AS(distortion_estimate(boole, 1, Interval(-5.0, 5.0), 10),
                  std::invalid_argument);
}

TEST_SUITE_END();
