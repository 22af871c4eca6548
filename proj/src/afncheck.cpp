#include "booledyn/afncheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "booledyn/errors.hpp"
#include "booledyn/empirical.hpp"

namespace booledyn {

double TanConjugated::derivative_at_line(double s) const {
  double t = map_->eval(s);
  double a = p_ * p_ + s * s;
  double b = p_ * p_ + t * t;
  return a / b * map_->derivative(s);
}

double TanConjugated::derivative(double x) const { return derivative_at_line(to_line(x)); }

double TanConjugated::second_derivative(double x) const {
  double s = to_line(x);
  double t = map_->eval(s);
  double t1 = map_->derivative(s);
  double t2 = map_->second_derivative(s);
  double a = p_ * p_ + s * s;
  double b = p_ * p_ + t * t;
  // d/dx = (a/p) d/ds applied to S' = a(s) t1(s) / b(s).
  return a / p_ * ((2.0 * s * t1 + a * t2) / b - 2.0 * a * t * t1 * t1 / (b * b));
}

double choose_p(const GeneralizedBoole& map, double k_target, int grid_size) {
  Interval core = map.core_interval();
  double z_max = std::max(std::fabs(core.lo), std::fabs(core.hi));
  double r_mass = map.rho_mass();
  double alpha = std::sqrt(r_mass) * z_max * (1.0 + 1.0 / r_mass);
  double beta = std::sqrt(r_mass) * (1.0 + z_max * z_max / r_mass);
  if (!(k_target > 1.0))
    throw std::invalid_argument("choose_p: K target must exceed 1");

  double p = std::sqrt(std::max(k_target, 2.0 * k_target * std::max(alpha * alpha, beta * beta)));

  // The sufficient condition is conservative; certify the grid minimum and
  // enlarge if a grid point still falls short.
  for (int attempt = 0; attempt < 60; ++attempt) {
    TanConjugated conj(map, p);
    double min_deriv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_size; ++i) {
      double s = core.lo + core.length() * i / grid_size;
      if (map.near_pole(s)) continue;
      min_deriv = std::min(min_deriv, conj.derivative_at_line(s));
    }
    if (min_deriv >= k_target) return p;
    p *= 2.0;
  }
  throw GridFailure("choose_p: expansion certificate failed to stabilize");
}

namespace {

double exponent_fit(const GeneralizedBoole& map, double p, int side) {
  // |S(x) - x| against h = distance to the parabolic endpoint, in the
  // pi/2-free form S(x) - x = -+(h - atan(p / (side T(s)))), s = side p cot h.
  std::vector<double> log_h, log_defect;
  for (int j = 0; j <= 8; ++j) {
    double h = 0.2 * std::pow(2.0, -j);
    double s = side * p / std::tan(h);
    double t = map.eval(s);
    double defect = std::fabs(h - std::atan(p / (side * t)));
    log_h.push_back(std::log(h));
    log_defect.push_back(std::log(defect));
  }
  return least_squares_slope(log_h, log_defect);
}

}  // namespace

AfnReport verify_afn(const GeneralizedBoole& map, double p, int grid_size) {
  if (grid_size < 100) throw std::invalid_argument("verify_afn: grid too small");
  TanConjugated conj(map, p);
  Interval core = map.core_interval();

  AfnReport report;
  report.p = p;
  report.branch_count = map.branch_count();

  // Expansion over the conjugated core.
  report.expansion_core = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_size; ++i) {
    double s = core.lo + core.length() * i / grid_size;
    if (map.near_pole(s)) continue;
    double d = conj.derivative_at_line(s);
    if (!(d > 1.0))
      throw GridFailure("verify_afn: expansion clause fails at s=" + std::to_string(s));
    report.expansion_core = std::min(report.expansion_core, d);
  }

  // Uniform expansion away from the parabolic endpoints, and Adler's bound on
  // the same grid; branch-endpoint neighbourhoods of half-width delta are
  // excluded from the Adler sup.
  const double delta = 1e-3;
  std::vector<double> branch_points;  // conjugated pole positions
  for (double pole : map.poles()) branch_points.push_back(std::atan(pole / p));

  report.expansion_off_ends = std::numeric_limits<double>::infinity();
  report.adler_sup = 0.0;
  for (int i = 1; i < grid_size; ++i) {
    double x = -M_PI_2 + delta + (M_PI - 2.0 * delta) * i / grid_size;
    double s = conj.to_line(x);
    if (map.near_pole(s)) continue;
    double d = conj.derivative(x);
    if (!(d > 1.0))
      throw GridFailure("verify_afn: uniform expansion fails at x=" + std::to_string(x));
    report.expansion_off_ends = std::min(report.expansion_off_ends, d);

    bool near_branch_end = false;
    for (double bp : branch_points)
      if (std::fabs(x - bp) < delta) near_branch_end = true;
    if (near_branch_end) continue;
    double adler = std::fabs(conj.second_derivative(x)) / (d * d);
    if (!std::isfinite(adler))
      throw GridFailure("verify_afn: Adler quantity blows up at x=" + std::to_string(x));
    report.adler_sup = std::max(report.adler_sup, adler);
  }

  // Finite-image condition, structurally: every branch sweeps out the full
  // interval, so S approaches -pi/2 and +pi/2 at the branch ends.
  double sweep = 0.0;
  for (int b = 0; b < map.branch_count(); ++b) {
    Interval dom = map.branch_interval(b);
    double lo_probe, hi_probe;
    if (std::isfinite(dom.lo)) {
      double scale = std::isfinite(dom.length()) ? dom.length() : 1.0;
      lo_probe = dom.lo + 1e-9 * scale;
    } else {
      lo_probe = conj.to_line(-M_PI_2 + 1e-7);
    }
    if (std::isfinite(dom.hi)) {
      double scale = std::isfinite(dom.length()) ? dom.length() : 1.0;
      hi_probe = dom.hi - 1e-9 * scale;
    } else {
      hi_probe = conj.to_line(M_PI_2 - 1e-7);
    }
    double s_lo = conj.from_line(map.eval(lo_probe));
    double s_hi = conj.from_line(map.eval(hi_probe));
    sweep = std::max(sweep, s_lo + M_PI_2);      // distance to -pi/2
    sweep = std::max(sweep, M_PI_2 - s_hi);      // distance to +pi/2
  }
  report.range_sweep_defect = sweep;
  if (!(sweep < 1e-2))
    throw GridFailure("verify_afn: a branch fails to sweep the full interval");

  report.exponent_fit_right = exponent_fit(map, p, +1);
  report.exponent_fit_left = exponent_fit(map, p, -1);
  report.parabolic_order = 2;
  return report;
}

// ---------------------------------------------------------------------------
// Return-map distortion
// ---------------------------------------------------------------------------

namespace {

struct ReturnCylinder {
  Interval domain;        // subinterval of D
  std::vector<int> word;  // T-branch indices until the return
  Interval image;         // T_D(domain), an interval inside D
};

// Forward endpoint map along `steps` applications on one parabolic branch.
double iterate_eval(const GeneralizedBoole& map, double x, int steps) {
  for (int i = 0; i < steps; ++i) x = map.eval(x);
  return x;
}

std::vector<ReturnCylinder> depth_one_cylinders(const GeneralizedBoole& map, int rung_cap,
                                                double* truncated_mass) {
  Interval core = map.core_interval();
  int right_branch = map.degree();
  const auto& poles = map.poles();

  // Re-entry ladders: the backward orbits of z^+ and z^- along the parabolic
  // branches. Points between ladder rungs m and m+1 land in D after m+1 steps.
  std::vector<double> ladder_plus{core.hi}, ladder_minus{core.lo};
  for (int m = 0; m < rung_cap; ++m) {
    ladder_plus.push_back(map.inverse_on_branch(right_branch, ladder_plus.back()));
    ladder_minus.push_back(map.inverse_on_branch(0, ladder_minus.back()));
  }

  // Fragments of D between consecutive poles.
  std::vector<std::pair<Interval, int>> fragments;  // (interval, branch)
  {
    double cursor = core.lo;
    for (double pole : poles) {
      if (pole > cursor && pole < core.hi) {
        fragments.push_back({Interval(cursor, pole), map.branch_of(0.5 * (cursor + pole))});
        cursor = pole;
      }
    }
    fragments.push_back({Interval(cursor, core.hi), map.branch_of(0.5 * (cursor + core.hi))});
  }

  std::vector<ReturnCylinder> cylinders;
  for (const auto& [fragment, branch] : fragments) {
    // The fragment's image is an interval of the line (unbounded at a pole
    // end); decompose it into immediate-return pieces and ladder rungs.
    bool lo_at_pole = std::binary_search(poles.begin(), poles.end(), fragment.lo);
    bool hi_at_pole = std::binary_search(poles.begin(), poles.end(), fragment.hi);
    const double inf = std::numeric_limits<double>::infinity();
    double img_lo = lo_at_pole ? -inf : map.eval(fragment.lo);
    double img_hi = hi_at_pole ? inf : map.eval(fragment.hi);

    auto pull_to_fragment = [&](double y) { return map.inverse_on_branch(branch, y); };

    auto add_cylinder = [&](const Interval& img_piece, const std::vector<int>& suffix,
                            const Interval& landing) {
      if (!(img_piece.length() > 1e-13)) return;
      ReturnCylinder cyl;
      cyl.domain = Interval(pull_to_fragment(img_piece.lo), pull_to_fragment(img_piece.hi));
      cyl.word.push_back(branch);
      cyl.word.insert(cyl.word.end(), suffix.begin(), suffix.end());
      cyl.image = landing;
      cylinders.push_back(std::move(cyl));
    };

    // Immediate returns: image pieces inside D, split at the poles.
    {
      double lo = std::max(img_lo, core.lo), hi = std::min(img_hi, core.hi);
      if (lo < hi) {
        double cursor = lo;
        for (double pole : poles) {
          if (pole > cursor && pole < hi) {
            add_cylinder(Interval(cursor, pole), {}, Interval(cursor, pole));
            cursor = pole;
          }
        }
        add_cylinder(Interval(cursor, hi), {}, Interval(cursor, hi));
      }
    }

    // Right excursions.
    for (int m = 0; m + 1 < static_cast<int>(ladder_plus.size()); ++m) {
      Interval rung(ladder_plus[m], ladder_plus[m + 1]);
      double lo = std::max(img_lo, rung.lo), hi = std::min(img_hi, rung.hi);
      if (!(lo < hi)) continue;
      std::vector<int> suffix(m + 1, right_branch);
      Interval landing(iterate_eval(map, lo, m + 1), iterate_eval(map, hi, m + 1));
      add_cylinder(Interval(lo, hi), suffix, landing);
    }
    // Left excursions.
    for (int m = 0; m + 1 < static_cast<int>(ladder_minus.size()); ++m) {
      Interval rung(ladder_minus[m + 1], ladder_minus[m]);
      double lo = std::max(img_lo, rung.lo), hi = std::min(img_hi, rung.hi);
      if (!(lo < hi)) continue;
      std::vector<int> suffix(m + 1, 0);
      Interval landing(iterate_eval(map, lo, m + 1), iterate_eval(map, hi, m + 1));
      add_cylinder(Interval(lo, hi), suffix, landing);
    }
  }

  if (truncated_mass != nullptr) {
    double covered = 0.0;
    for (const auto& cyl : cylinders) covered += cyl.domain.length();
    *truncated_mass = std::max(0.0, core.length() - covered);
  }
  return cylinders;
}

}  // namespace

DistortionReport distortion_estimate(const GeneralizedBoole& map, int depth, const Interval& e,
                                     int rung_cap) {
  if (depth < 1 || depth > 6) throw std::invalid_argument("distortion_estimate: depth in [1,6]");
  Interval core = map.core_interval();
  if (!(e.lo >= core.lo && e.hi <= core.hi && e.length() > 0))
    throw std::invalid_argument("distortion_estimate: E must be a subinterval of D");
  if (rung_cap <= 0)
    rung_cap = (depth == 1)
                   ? 1000
                   : std::max(4, static_cast<int>(0.5 * std::pow(1e6, 1.0 / depth)) - 1);

  DistortionReport report;
  report.depth = depth;

  double truncated = 0.0;
  auto depth1 = depth_one_cylinders(map, rung_cap, &truncated);
  report.truncated_mass = truncated;

  const long long overflow_cap = 1000000;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = 0.0;

  // Depth-first over return words. The running word is the concatenated
  // T-branch word; `image` is the forward image after the returns so far.
  std::vector<int> word;
  long long visited = 0;

  // Cheap counting pass first: the measuring pass pulls every cylinder back
  // through its word, which is far too expensive to discover an overflow with.
  std::function<void(int, const Interval&)> count_leaves = [&](int level,
                                                               const Interval& image) {
    if (level == depth) {
      ++visited;
      if (visited > overflow_cap)
        throw CylinderOverflow("distortion_estimate: more than 1e6 cylinders");
      return;
    }
    for (const auto& cyl : depth1) {
      double lo = std::max(image.lo, cyl.domain.lo);
      double hi = std::min(image.hi, cyl.domain.hi);
      if (!(hi - lo > 1e-9)) continue;
      double img_lo = lo, img_hi = hi;
      for (std::size_t s = 0; s < cyl.word.size(); ++s) {
        img_lo = map.eval(img_lo);
        img_hi = map.eval(img_hi);
      }
      if (!(img_lo < img_hi)) continue;
      count_leaves(level + 1, Interval(img_lo, img_hi));
    }
  };
  count_leaves(0, core);
  visited = 0;

  auto pull_back = [&](Interval y) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      y = Interval(map.inverse_on_branch(*it, y.lo), map.inverse_on_branch(*it, y.hi));
    }
    return y;
  };

  // Slivers below the inverse-solver resolution cannot be measured; they are
  // skipped and counted rather than reported as spurious zero ratios.
  const double measurable = 1e-9;

  std::function<void(int, const Interval&)> descend = [&](int level, const Interval& image) {
    if (level == depth) {
      ++visited;
      double re_lo = std::max(e.lo, image.lo), re_hi = std::min(e.hi, image.hi);
      if (!(re_hi - re_lo > measurable)) {
        ++report.skipped_unreachable;
        return;
      }
      double e_share = (re_hi - re_lo) / image.length();
      Interval dom = pull_back(image);
      Interval e_dom = pull_back(Interval(re_lo, re_hi));
      if (!(dom.length() > 0.0) || !(e_dom.length() > 0.0)) {
        ++report.skipped_unreachable;
        return;
      }
      double ratio = (e_dom.length() / dom.length()) / e_share;
      report.min_ratio = std::min(report.min_ratio, ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
      ++report.cylinder_count;
      return;
    }
    for (const auto& cyl : depth1) {
      double lo = std::max(image.lo, cyl.domain.lo);
      double hi = std::min(image.hi, cyl.domain.hi);
      if (!(hi - lo > measurable)) continue;
      // Forward-map the overlap through this cylinder's word.
      double img_lo = lo, img_hi = hi;
      for (std::size_t s = 0; s < cyl.word.size(); ++s) {
        img_lo = map.eval(img_lo);
        img_hi = map.eval(img_hi);
      }
      if (!(img_lo < img_hi)) continue;
      std::size_t mark = word.size();
      word.insert(word.end(), cyl.word.begin(), cyl.word.end());
      descend(level + 1, Interval(img_lo, img_hi));
      word.resize(mark);
    }
  };

  descend(0, core);
  if (report.cylinder_count == 0)
    throw InsufficientSamples("distortion_estimate: no cylinder reaches E");
  report.bound_estimate = std::max(report.max_ratio, 1.0 / report.min_ratio);
  return report;
}

}  // namespace booledyn
