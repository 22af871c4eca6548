#ifndef BOOLEDYN_PERIODIC_HPP
#define BOOLEDYN_PERIODIC_HPP

#include <vector>

#include "booledyn/interval.hpp"
#include "booledyn/maps.hpp"

namespace booledyn {

// Period bound for the classical Boole map: a periodic point exists within
// distance r of x with period at most (-ln r/ln 2 + 1) * 4/r^2 + x^2,
// for r in (0, 1/4).
double period_bound_boole(double x, double r);

// Constants entering the general period bound, computed from the map:
// K = grid-min of T' on the core interval, c = sum of weights (the parabolic
// coefficient), W = sup over D of |x| + (1 + |x| max|a_k|) sum b_k/(1+a_k^2).
struct PeriodBoundConstants {
  double expansion = 0;  // K
  double parabolic = 0;  // c
  double excursion = 0;  // W
};

PeriodBoundConstants period_bound_constants(const GeneralizedBoole& map, int grid_size = 4096);

// (-ln r / ln K + 1) * W/(c r^2) + x^2/c with the constants above. Raises
// ConstantsUnavailable if the expansion certificate fails.
double period_bound_general(const GeneralizedBoole& map, double x, double r);

// Largest admissible search radius: min(1/4, min pole gap / 4).
double max_search_radius(const GeneralizedBoole& map);

struct PeriodicSearchResult {
  // The cycle point as a double-double pair: point + point_correction. The
  // correction matters for deep excursions, where a cycle's multiplier times
  // one ulp already exceeds the residual tolerance.
  double point = 0;
  double point_correction = 0;
  long long period = 0;
  double residual = 0;  // |T^N(p) - p| evaluated in extended precision
  double bound = 0;     // applicable period bound at (center, radius)
  std::vector<int> branch_word;      // branch index at each step of the cycle
  double certificate_length = 0;     // length of the composed-inverse image of B
  double min_pole_distance = 0;      // over the cycle, distance to the nearest pole
};

struct FindPeriodicOptions {
  double residual_tol = 1e-12;  // scaled by max(1, |p|)
  int max_pieces = 64;
  int max_candidates = 64;
};

// Searches (x-r, x+r) by forward-iterating the interval as a union of
// branch-tagged pieces until some piece's image covers the closure; the
// composed inverse branch word then contracts onto the periodic point.
PeriodicSearchResult find_periodic(const GeneralizedBoole& map, double center, double radius,
                                   const FindPeriodicOptions& options = {});

// Forward re-iteration of a search result, in extended precision: the
// residual after exactly `period` steps and the smallest pole distance met.
struct CycleVerification {
  double residual = 0;
  double min_pole_distance = 0;
  bool guard_clear = false;  // every iterate stayed outside the pole guards
};

CycleVerification verify_cycle(const GeneralizedBoole& map, const PeriodicSearchResult& found);

// Grid report of the mapping estimates behind the period bounds: expansion on
// the core interval, passage into D within x^2/c steps, and the excursion
// bound for points of D outside the pole neighbourhoods D_r.
struct MappingPropertiesReport {
  double min_core_derivative = 0;
  double core_derivative_threshold = 0;
  bool derivative_ok = false;

  long long worst_passage_steps = -1;
  long long passage_grid_failures = 0;
  bool passage_ok = false;

  long long worst_escape_steps = -1;
  long long escape_bound = 0;
  long long escape_grid_failures = 0;
  bool escape_ok = false;
};

MappingPropertiesReport check_mapping_properties(const GeneralizedBoole& map, int grid_size,
                                                 double r, double passage_window = 10.0);

}  // namespace booledyn

#endif
