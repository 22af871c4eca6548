#include <doctest.h>

#include <cmath>

#include "booledyn/maps.hpp"
#include "booledyn/measures.hpp"
#include "booledyn/rng.hpp"

using namespace booledyn;

namespace {

// Test-local root finder, independent of the library's bracketing logic:
// plain bisection of fn on [lo, hi].
template <typename Fn>
double bisect(Fn fn, double lo, double hi) {
  double flo = fn(lo);
  REQUIRE(flo * fn(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = fn(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GeneralizedBoole gb4() { return GeneralizedBoole({-2.0, -1.0, 1.0, 2.0}, {1.0, 1.0, 1.0, 1.0}); }

}  // namespace

TEST_SUITE_BEGIN("maps");

TEST_CASE("evaluation of the Boole and generalized Boole maps") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  CHECK(boole.eval(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(boole.eval(2.0) == doctest::Approx(1.5).epsilon(1e-15));

  // 3 - 1/5 - 1/4 - 1/2 - 1/1 = 1.05 for poles {-2,-1,1,2}, unit weights.
  CHECK(gb4().eval(3.0) == doctest::Approx(1.05).epsilon(1e-14));
}

TEST_CASE("derivatives exceed one everywhere") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  CHECK(boole.derivative(1.0) == doctest::Approx(2.0));
  CHECK(boole.derivative(2.0) == doctest::Approx(1.25));
  CHECK(gb4().derivative(0.0) == doctest::Approx(3.5));

  RandomStream rs = SeededSampler(5).stream(0);
  for (int i = 0; i < 1000; ++i) {
    double x = rs.cauchy();
    if (boole.near_pole(x) || gb4().near_pole(x)) continue;
    CHECK(boole.derivative(x) > 1.0);
    CHECK(gb4().derivative(x) > 1.0);
  }
}

TEST_CASE("pole guard flags pole hits") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  CHECK(boole.near_pole(0.0));
  CHECK(boole.near_pole(1e-13));
  CHECK_FALSE(boole.near_pole(1e-10));
  CHECK(std::isnan(boole.eval_guarded(0.0)));
  CHECK_FALSE(boole.eval_checked(1e-6) == std::nullopt);

  // An orbit landing exactly on the pole: T(1) = 0.
  CHECK(std::isnan(boole.eval_guarded(boole.eval(1.0))));
}

TEST_CASE("constructor rejects malformed maps") {
  CHECK_THROWS_AS(GeneralizedBoole({1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(GeneralizedBoole({0.0}, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(GeneralizedBoole({}, {}), std::invalid_argument);
}

TEST_CASE("branch inverses match an independent bisection") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  CHECK(boole.inverse_on_branch(1, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(boole.inverse_on_branch(0, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));

  // Invert eval(2) = 1.5 by bisection on (0, inf).
  double oracle = bisect([&](double x) { return boole.eval(x) - 1.5; }, 1e-9, 10.0);
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(boole.inverse_on_branch(1, 1.5) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("branch inverse is a two-sided inverse") {
  GeneralizedBoole map = gb4();
  RandomStream rs = SeededSampler(11).stream(0);
  for (int i = 0; i < 200; ++i) {
    double y = rs.cauchy();
    if (std::fabs(y) > 100.0) continue;  // see the conditioning case below
    for (int b = 0; b < map.branch_count(); ++b) {
      double x = map.inverse_on_branch(b, y);
      CHECK(map.branch_interval(b).contains(x));
      CHECK(map.eval(x) == doctest::Approx(y).epsilon(1e-13));
    }
  }
  // Far out on a hyperbolic branch the preimage hugs a pole and one ulp of x
  // already moves the value by T'(x) ulp; the round-trip is exact up to that
  // conditioning floor.
  for (double y : {-2045.27, 3333.0, -1e6}) {
    for (int b = 1; b + 1 < map.branch_count(); ++b) {
      double x = map.inverse_on_branch(b, y);
      double floor = map.derivative(x) * 1e-15 * std::max(1.0, std::fabs(x));
      CHECK(std::fabs(map.eval(x) - y) <= 1e-13 * std::fabs(y) + floor);
    }
  }
  // and inverse(eval(x)) = x for x inside a branch
  for (int i = 0; i < 200; ++i) {
    double x = rs.uniform(-3.0, 3.0);
    if (map.near_pole(x)) continue;
    int b = map.branch_of(x);
    CHECK(map.inverse_on_branch(b, map.eval(x)) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("monotone interleaving of preimages") {
  GeneralizedBoole map = gb4();
  RandomStream rs = SeededSampler(12).stream(0);
  for (int i = 0; i < 100; ++i) {
    double y = rs.cauchy();
    double prev = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < map.branch_count(); ++b) {
      double x = map.inverse_on_branch(b, y);
      CHECK(x > prev);
      prev = x;
    }
  }
  // inverse is monotone in y on a fixed branch
  double a = map.inverse_on_branch(2, -1.0);
  double b = map.inverse_on_branch(2, 1.0);
  CHECK(a < b);
}

TEST_CASE("Lebesgue measure is invariant under preimages") {
  RandomStream rs = SeededSampler(13).stream(0);
  for (const auto& map : {GeneralizedBoole::boole(), gb4()}) {
    for (int i = 0; i < 50; ++i) {
      double c = rs.cauchy(), d = rs.cauchy();
      if (c > d) std::swap(c, d);
      if (d - c < 1e-3) d = c + 1e-3;
      double total = 0.0;
      for (int b = 0; b < map.branch_count(); ++b)
        total += map.inverse_on_branch(b, d) - map.inverse_on_branch(b, c);
      CHECK(std::fabs(total - (d - c)) / (d - c) <= 1e-8);
    }
  }
}

TEST_CASE("backward parabolic orbits") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  auto two = boole.backward_parabolic_orbit(+1, 2);
  CHECK(two[0] == 0.0);
  CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-14));

  // Third entry solves x - 1/x = 1: the golden ratio.
  double golden = bisect([&](double x) { return boole.eval(x) - 1.0; }, 1e-9, 10.0);
  CHECK(golden == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  auto three = boole.backward_parabolic_orbit(+1, 3);
  CHECK(three[2] == doctest::Approx(golden).epsilon(1e-12));

  auto minus = boole.backward_parabolic_orbit(-1, 3);
  CHECK(minus[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(minus[2] < minus[1]);
}

TEST_CASE("backward orbit grows like sqrt(2n)") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  int n = 5000;
  auto orbit = boole.backward_parabolic_orbit(+1, n + 1);
  // Consistency: each entry is the forward image of the next.
  for (int k : {1, 10, 100, 4999})
    CHECK(boole.eval(orbit[k + 1]) == doctest::Approx(orbit[k]).epsilon(1e-11));
  double ratio = orbit[n] / std::sqrt(2.0 * n);
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);

  // Boundedness of p_n / sqrt(n) over the computed range.
  double sup = 0.0;
  for (int k = 1; k <= n; ++k) sup = std::max(sup, orbit[k] / std::sqrt(double(k)));
  CHECK(sup < 2.0);
}

TEST_CASE("core intervals") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  Interval d = boole.core_interval();
  CHECK(d.lo == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(d.hi == doctest::Approx(1.0).epsilon(1e-14));

  GeneralizedBoole map = gb4();
  Interval d4 = map.core_interval();
  CHECK(map.eval(d4.lo) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(map.eval(d4.hi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d4.hi > 2.0);
  double oracle = bisect([&](double x) { return map.eval(x); }, 2.0 + 1e-9, 10.0);
  CHECK(d4.hi == doctest::Approx(oracle).epsilon(1e-12));

  // Every pole lies inside the core interval.
  for (double pole : map.poles()) CHECK(d4.contains(pole));
}

TEST_CASE("derivative bound on the Boole core interval") {
  GeneralizedBoole boole = GeneralizedBoole::boole();
  double min_deriv = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 2000; ++i) {
    double x = -1.0 + 2.0 * i / 2000;
    if (boole.near_pole(x)) continue;
    min_deriv = std::min(min_deriv, boole.derivative(x));
  }
  CHECK(min_deriv > 2.0);
}

TEST_CASE("branch structure") {
  GeneralizedBoole map = gb4();
  BranchStructure bs = make_branch_structure(map, 16, 0.5);
  CHECK(bs.branches.size() == 5);
  CHECK(bs.branches.front().parabolic);
  CHECK(bs.branches.back().parabolic);
  CHECK_FALSE(bs.branches[2].parabolic);
  for (std::size_t i = 1; i < bs.backward_plus.size(); ++i) {
    CHECK(bs.backward_plus[i] > bs.backward_plus[i - 1]);
    CHECK(bs.backward_minus[i] < bs.backward_minus[i - 1]);
  }
  CHECK(bs.core.contains(Interval(-2.0, 2.0)));
}

TEST_CASE("cotangent map basics") {
  CotangentMap cot;
  // T(2/pi) = cot(pi/2) = 0: the rightmost preimage of zero.
  CHECK(cot.eval(2.0 / M_PI) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(cot.core_interval().hi == doctest::Approx(2.0 / M_PI).epsilon(1e-15));

  // Near-parabolic behaviour at infinity: T(x) = x - 1/(3x) + O(1/x^3).
  double x = 50.0;
  CHECK(cot.eval(x) == doctest::Approx(x - 1.0 / (3.0 * x)).epsilon(1e-7));

  // Derivative exceeds 1 off the poles.
  RandomStream rs = SeededSampler(17).stream(0);
  for (int i = 0; i < 500; ++i) {
    double v = rs.cauchy();
    if (cot.near_pole(v)) continue;
    CHECK(cot.derivative(v) > 1.0);
  }

  // Pole guard around 1/(k pi) and the singularity at 0.
  CHECK(cot.near_pole(0.0));
  CHECK(cot.near_pole(1.0 / M_PI));
  CHECK(cot.near_pole(1e-9));  // beyond the branch cutoff
  CHECK_FALSE(cot.near_pole(0.5));
}

TEST_CASE("cotangent branch inverses are two-sided") {
  CotangentMap cot;
  RandomStream rs = SeededSampler(19).stream(0);
  for (int i = 0; i < 100; ++i) {
    double y = rs.cauchy();
    for (std::int64_t k : {std::int64_t(1), std::int64_t(2), std::int64_t(-3)}) {
      double x = cot.inverse_on_hyperbolic(k, y);
      CHECK(cot.hyperbolic_branch(k).contains(x));
      CHECK(cot.eval(x) == doctest::Approx(y).epsilon(1e-11));
    }
    for (int side : {+1, -1}) {
      double x = cot.inverse_on_parabolic(side, y);
      CHECK(cot.parabolic_branch(side).contains(x));
      CHECK(cot.eval(x) == doctest::Approx(y).epsilon(1e-11));
    }
  }

  auto plus = cot.backward_parabolic_orbit(+1, 200);
  for (int k : {1, 50, 198}) CHECK(cot.eval(plus[k + 1]) == doctest::Approx(plus[k]).epsilon(1e-10));
  // Growth ~ sqrt(2cn) with c = 1/3.
  double ratio = plus[199] / std::sqrt(2.0 * 199.0 / 3.0);
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_SUITE_END();
