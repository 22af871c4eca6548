#include "booledyn/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "booledyn/errors.hpp"

namespace booledyn {

namespace {

#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

wide wide_abs(wide x) { return x < 0 ? -x : x; }

wide eval_wide(const GeneralizedBoole& map, wide x) {
  wide acc = x;
  for (std::size_t k = 0; k < map.poles().size(); ++k)
    acc -= static_cast<wide>(map.weights()[k]) / (x - static_cast<wide>(map.poles()[k]));
  return acc;
}

wide derivative_wide(const GeneralizedBoole& map, wide x) {
  wide acc = 1;
  for (std::size_t k = 0; k < map.poles().size(); ++k) {
    wide dx = x - static_cast<wide>(map.poles()[k]);
    acc += static_cast<wide>(map.weights()[k]) / (dx * dx);
  }
  return acc;
}

bool is_classical_boole(const GeneralizedBoole& map) {
  return map.degree() == 1 && map.poles()[0] == 0.0 && map.weights()[0] == 1.0;
}

// One forward-tracked subset of the search interval: its current image and
// the branch taken at each step so far.
struct Piece {
  double lo, hi;  // open interval, endpoints possibly infinite
  std::vector<int> word;

  double length() const { return hi - lo; }
};

double piece_rank(const Piece& p) {
  double len = p.length();
  return std::isfinite(len) ? len : std::numeric_limits<double>::max();
}

}  // namespace

double period_bound_boole(double x, double r) {
  if (!(r > 0.0 && r < 0.25)) throw std::invalid_argument("period_bound_boole: need r in (0,1/4)");
  return (-std::log(r) / std::log(2.0) + 1.0) * 4.0 / (r * r) + x * x;
}

PeriodBoundConstants period_bound_constants(const GeneralizedBoole& map, int grid_size) {
  PeriodBoundConstants out;
  Interval core = map.core_interval();
  double min_deriv = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_size; ++i) {
    double x = core.lo + core.length() * i / grid_size;
    if (map.near_pole(x)) continue;
    min_deriv = std::min(min_deriv, map.derivative(x));
  }
  if (!(min_deriv > 1.0 + 1e-9))
    throw ConstantsUnavailable("period_bound_constants: no expansion on the core interval");
  out.expansion = min_deriv;
  out.parabolic = map.weight_sum();
  double z_max = std::max(std::fabs(core.lo), std::fabs(core.hi));
  out.excursion = z_max + (1.0 + z_max * map.max_abs_pole()) * map.rho_mass();
  return out;
}

double period_bound_general(const GeneralizedBoole& map, double x, double r) {
  if (!(r > 0.0 && r < max_search_radius(map)))
    throw std::invalid_argument("period_bound_general: radius too large for this map");
  PeriodBoundConstants c = period_bound_constants(map);
  return (-std::log(r) / std::log(c.expansion) + 1.0) * c.excursion / (c.parabolic * r * r) +
         x * x / c.parabolic;
}

double max_search_radius(const GeneralizedBoole& map) {
  double gap = std::numeric_limits<double>::infinity();
  const auto& poles = map.poles();
  for (std::size_t k = 0; k + 1 < poles.size(); ++k)
    gap = std::min(gap, poles[k + 1] - poles[k]);
  double r0 = 0.25;
  if (std::isfinite(gap)) r0 = std::min(r0, 0.25 * gap);
  return r0;
}

CycleVerification verify_cycle(const GeneralizedBoole& map, const PeriodicSearchResult& found) {
  CycleVerification out;
  out.min_pole_distance = std::numeric_limits<double>::infinity();
  out.guard_clear = true;
  wide p = static_cast<wide>(found.point) + static_cast<wide>(found.point_correction);
  wide x = p;
  for (long long k = 0; k < found.period; ++k) {
    double xd = static_cast<double>(x);
    for (double pole : map.poles())
      out.min_pole_distance = std::min(out.min_pole_distance, std::fabs(xd - pole));
    if (map.near_pole(xd)) out.guard_clear = false;
    x = eval_wide(map, x);
  }
  out.residual = static_cast<double>(wide_abs(x - p));
  return out;
}

namespace {

// Newton refinement of the fixed point of T^N in extended precision, starting
// from the double-precision contraction limit.
wide refine_cycle_point(const GeneralizedBoole& map, wide seed, long long period) {
  wide p = seed;
  for (int iter = 0; iter < 6; ++iter) {
    wide x = p;
    wide deriv = 1;
    for (long long k = 0; k < period; ++k) {
      deriv *= derivative_wide(map, x);
      x = eval_wide(map, x);
    }
    wide f = x - p;
    wide fp = deriv - 1;
    if (fp == 0) break;
    wide step = f / fp;
    p -= step;
    if (wide_abs(step) < wide_abs(p) * 1e-30 + 1e-300) break;
  }
  return p;
}

struct Candidate {
  PeriodicSearchResult result;
  bool ok = false;
};

Candidate certify_word(const GeneralizedBoole& map, double center, double radius,
                       const std::vector<int>& word, double bound, double residual_tol) {
  Candidate cand;
  double lo = center - radius, hi = center + radius;

  auto pull_back = [&](double y) {
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      y = map.inverse_on_branch(*it, y);
    return y;
  };

  double glo, ghi;
  try {
    glo = pull_back(lo);
    ghi = pull_back(hi);
  } catch (const NonConvergence&) {
    return cand;
  }
  if (!(glo < ghi) || glo < lo || ghi > hi) return cand;
  // Contraction certificate: the inverse word must at least halve B.
  if (!(ghi - glo < radius)) return cand;

  // Contract to the fixed point of the composed inverse.
  double y = center;
  for (int iter = 0; iter < 200; ++iter) {
    double next;
    try {
      next = pull_back(y);
    } catch (const NonConvergence&) {
      return cand;
    }
    double delta = std::fabs(next - y);
    y = next;
    if (delta < 1e-15 * std::max(1.0, std::fabs(y))) break;
  }

  wide refined = refine_cycle_point(map, static_cast<wide>(y), static_cast<long long>(word.size()));
  PeriodicSearchResult res;
  res.point = static_cast<double>(refined);
  res.point_correction = static_cast<double>(refined - static_cast<wide>(res.point));
  res.period = static_cast<long long>(word.size());
  res.bound = bound;
  res.branch_word = word;
  res.certificate_length = ghi - glo;

  if (!(res.point > lo && res.point < hi)) return cand;

  CycleVerification check = verify_cycle(map, res);
  res.residual = check.residual;
  res.min_pole_distance = check.min_pole_distance;
  if (!check.guard_clear) return cand;
  if (!(res.residual <= residual_tol * std::max(1.0, std::fabs(res.point)))) return cand;

  cand.result = res;
  cand.ok = true;
  return cand;
}

}  // namespace

PeriodicSearchResult find_periodic(const GeneralizedBoole& map, double center, double radius,
                                   const FindPeriodicOptions& options) {
  double r0 = max_search_radius(map);
  if (!(radius > 0.0 && radius < r0))
    throw std::invalid_argument("find_periodic: radius must lie in (0, " + std::to_string(r0) +
                                ") for this map");

  double bound = is_classical_boole(map) ? period_bound_boole(center, radius)
                                         : period_bound_general(map, center, radius);
  auto step_cap = static_cast<long long>(std::ceil(bound));

  const double inf = std::numeric_limits<double>::infinity();
  const auto& poles = map.poles();
  double lo = center - radius, hi = center + radius;

  std::vector<Piece> pieces{{lo, hi, {}}};
  int candidates_tried = 0;

  for (long long step = 1; step <= step_cap; ++step) {
    std::vector<Piece> next;
    for (const Piece& piece : pieces) {
      // Split at the poles falling strictly inside, then push each fragment
      // through its branch. A fragment whose endpoint sits on a pole (or at
      // infinity) maps to an unbounded interval.
      double cursor = piece.lo;
      bool cursor_on_pole = false;
      auto emit = [&](double u, double v, bool u_pole, bool v_pole) {
        if (!(u < v)) return;
        // Endpoints inside a pole guard are treated as the pole itself; the
        // image end then goes to infinity (a 1e-12-scale enlargement at most).
        u_pole = u_pole || (std::isfinite(u) && map.near_pole(u));
        v_pole = v_pole || (std::isfinite(v) && map.near_pole(v));
        int branch;
        if (std::isfinite(u) && std::isfinite(v)) {
          branch = map.branch_of(0.5 * (u + v));
        } else {
          double rep = std::isfinite(u) ? u + 1.0 : (std::isfinite(v) ? v - 1.0 : 0.0);
          branch = map.branch_of(rep);
        }
        Piece child;
        child.lo = (u_pole || !std::isfinite(u)) ? -inf : map.eval(u);
        child.hi = (v_pole || !std::isfinite(v)) ? inf : map.eval(v);
        child.word = piece.word;
        child.word.push_back(branch);
        if (child.lo < child.hi) next.push_back(std::move(child));
      };
      for (double pole : poles) {
        if (pole > cursor && pole < piece.hi) {
          emit(cursor, pole, cursor_on_pole, true);
          cursor = pole;
          cursor_on_pole = true;
        }
      }
      emit(cursor, piece.hi, cursor_on_pole, false);
    }

    // Keep the widest pieces.
    if (static_cast<int>(next.size()) > options.max_pieces) {
      std::stable_sort(next.begin(), next.end(), [](const Piece& a, const Piece& b) {
        return piece_rank(a) > piece_rank(b);
      });
      next.resize(static_cast<std::size_t>(options.max_pieces));
    }
    pieces = std::move(next);
    if (pieces.empty()) break;

    for (const Piece& piece : pieces) {
      if (piece.lo <= lo && piece.hi >= hi) {
        if (candidates_tried >= options.max_candidates) break;
        ++candidates_tried;
        Candidate cand =
            certify_word(map, center, radius, piece.word, bound, options.residual_tol);
        if (cand.ok) return cand.result;
      }
    }
  }
  throw SearchExhausted("find_periodic: no certified cycle within the period bound");
}

MappingPropertiesReport check_mapping_properties(const GeneralizedBoole& map, int grid_size,
                                                 double r, double passage_window) {
  if (grid_size < 2) throw std::invalid_argument("check_mapping_properties: grid too small");
  MappingPropertiesReport out;
  Interval core = map.core_interval();
  bool boole = is_classical_boole(map);
  PeriodBoundConstants constants =
      boole ? PeriodBoundConstants{2.0, 1.0, 2.0} : period_bound_constants(map);

  // (a) expansion on the core interval.
  out.core_derivative_threshold = boole ? 2.0 : 1.0;
  out.min_core_derivative = std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid_size; ++i) {
    double x = core.lo + core.length() * i / grid_size;
    if (map.near_pole(x)) continue;
    out.min_core_derivative = std::min(out.min_core_derivative, map.derivative(x));
  }
  out.derivative_ok = out.min_core_derivative > out.core_derivative_threshold;

  auto steps_into_core = [&](double x, long long cap) -> long long {
    for (long long n = 0; n <= cap; ++n) {
      if (n > 0) {
        x = map.next_point(x);
        if (std::isnan(x)) return -1;
      }
      if (core.contains(x)) return n;
    }
    return -1;
  };

  // (b) passage into D within floor(x^2/c) steps, on a window grid.
  out.passage_ok = true;
  for (int i = 0; i <= grid_size; ++i) {
    double x = -passage_window + 2.0 * passage_window * i / grid_size;
    if (map.near_pole(x)) continue;
    auto cap = static_cast<long long>(std::floor(x * x / constants.parabolic));
    long long steps = steps_into_core(x, cap);
    if (steps < 0) {
      ++out.passage_grid_failures;
      out.passage_ok = false;
    } else {
      out.worst_passage_steps = std::max(out.worst_passage_steps, steps);
    }
  }

  // (c) points of D at distance >= r/2 from every pole come back within the
  // excursion bound.
  out.escape_bound = boole ? static_cast<long long>(std::floor(4.0 / (r * r)))
                           : static_cast<long long>(std::floor(
                                 constants.excursion / (constants.parabolic * r * r)));
  out.escape_ok = true;
  for (int i = 1; i < grid_size; ++i) {
    double x = core.lo + core.length() * i / grid_size;
    bool in_guard_zone = false;
    for (double pole : map.poles())
      if (std::fabs(x - pole) < 0.5 * r) in_guard_zone = true;
    if (in_guard_zone || map.near_pole(x)) continue;
    double y = map.next_point(x);
    long long steps = -1;
    if (!std::isnan(y)) {
      if (core.contains(y)) {
        steps = 1;
      } else {
        long long more = steps_into_core(y, out.escape_bound - 1);
        if (more >= 0) steps = more + 1;
      }
    }
    if (steps < 0 || steps > out.escape_bound) {
      ++out.escape_grid_failures;
      out.escape_ok = false;
    } else {
      out.worst_escape_steps = std::max(out.worst_escape_steps, steps);
    }
  }
  return out;
}

}  // namespace booledyn
