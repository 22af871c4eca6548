#ifndef BOOLEDYN_ORBITSTATS_HPP
#define BOOLEDYN_ORBITSTATS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "booledyn/empirical.hpp"
#include "booledyn/errors.hpp"
#include "booledyn/interval.hpp"
#include "booledyn/maps.hpp"
#include "booledyn/measures.hpp"
#include "booledyn/parallel.hpp"
#include "booledyn/rng.hpp"

namespace booledyn {

// One-pass statistics of a single orbit against a bounded target.
struct OrbitStatistics {
  long long horizon = 0;
  long long occupation = 0;   // visits among orbit points 0..horizon-1
  long long last_visit = 0;   // 1-based index of the last visiting point, 0 if none
  long long entry_time = -1;  // first k with the k-th point in the target, -1 if none
  std::vector<long long> return_times;  // gaps between consecutive visits
  bool truncated = false;               // a pole guard cut the orbit short
  long long steps_completed = 0;        // orbit points actually produced
};

template <typename Map>
OrbitStatistics simulate_orbit(const Map& map, double x0, const Interval& target,
                               long long horizon) {
  if (horizon < 1) throw std::invalid_argument("simulate_orbit: horizon must be >= 1");
  if (!target.bounded()) throw std::invalid_argument("simulate_orbit: target must be bounded");
  OrbitStatistics st;
  st.horizon = horizon;
  if (map.near_pole(x0)) {
    st.truncated = true;
    return st;
  }
  double x = x0;
  long long previous_visit = -1;
  for (long long k = 0; k < horizon; ++k) {
    if (target.contains(x)) {
      ++st.occupation;
      st.last_visit = k + 1;
      if (st.entry_time < 0) st.entry_time = k;
      if (previous_visit >= 0) st.return_times.push_back(k - previous_visit);
      previous_visit = k;
    }
    ++st.steps_completed;
    if (k + 1 < horizon) {
      x = map.next_point(x);
      if (std::isnan(x)) {
        st.truncated = true;
        break;
      }
    }
  }
  return st;
}

// Orbit points themselves (for the `simulate` CLI export). Stops early on a
// pole hit.
template <typename Map>
std::vector<double> orbit_trace(const Map& map, double x0, long long count) {
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(count));
  if (map.near_pole(x0)) return points;
  double x = x0;
  for (long long k = 0; k < count; ++k) {
    points.push_back(x);
    if (k + 1 < count) {
      x = map.next_point(x);
      if (std::isnan(x)) break;
    }
  }
  return points;
}

// --- occupation growth -----------------------------------------------------

struct OccupationGrowthRow {
  long long horizon = 0;
  double q10 = 0, q25 = 0, q50 = 0, q75 = 0, q90 = 0;
  double mean = 0;
};

struct OccupationGrowthResult {
  double epsilon = 0;
  std::vector<OccupationGrowthRow> rows;  // quantiles of S_n / n^(1/2 - epsilon)
  long long resampled = 0;                // truncated orbits replaced
};

OccupationGrowthResult occupation_growth(const GeneralizedBoole& map, const Interval& target,
                                         double epsilon,
                                         const std::vector<long long>& horizons,
                                         long long samples, const SeededSampler& sampler);

// --- first-return-time tail -------------------------------------------------

struct TailBin {
  long long lo = 0, hi = 0;  // [lo, hi)
  long long count = 0;
  double abscissa = 0;    // geometric bin midpoint
  double mass_per_n = 0;  // lambda-mass estimate of {tau = n}, averaged over the bin
};

struct ReturnTailResult {
  std::vector<TailBin> bins;
  double slope = 0;            // log-log fit across the bins
  double lambda_first = 0;     // estimate of lambda{x in E : tau = 1}
  long long samples = 0;       // conditioned initial points
  long long censored = 0;      // returns beyond the tracking cap
  long long resampled = 0;     // truncated orbits replaced
  std::vector<long long> histogram;  // histogram[t] = #returns with tau = t
};

// Initial points are lambda-samples conditioned into the target by rejection.
// Bins are dyadic on [bin_lo, bin_hi]; any reported bin with fewer than 100
// events raises InsufficientSamples.
ReturnTailResult return_time_tail(const GeneralizedBoole& map, const Interval& target,
                                  long long samples, const SeededSampler& sampler,
                                  long long bin_lo = 8, long long bin_hi = 512,
                                  long long track_cap = 4096);

// --- escape-time tail (exact) ------------------------------------------------

struct EscapeTailResult {
  std::vector<long long> n_values;
  std::vector<double> mass;         // lambda(F_n): tail mass beyond the n-th
                                    // backward parabolic orbit points
  std::vector<double> sqrt_scaled;  // sqrt(n) * lambda(F_n)
  double slope = 0;                 // log-log fit over the requested range
  double first_mass = 0;            // lambda(F_1)
};

// No sampling: F_n is computed from the backward parabolic orbits, with
// lambda(F_n) = lambda(-inf, p_n^-) + lambda(p_n^+, +inf) anchored so that
// F_1 reaches to the extreme preimages of zero.
EscapeTailResult escape_time_tail(const GeneralizedBoole& map, long long n_max,
                                  long long fit_lo = 100, long long fit_hi = 100000);

// --- distributional laws -----------------------------------------------------

struct DistributionResult {
  EmpiricalDistribution dist;
  double ks = 0;
  long long resampled = 0;
};

// Samples of (pi/sqrt(2n)) S_n(E)/mu(E) with the Kolmogorov-Smirnov distance
// against the unit-mean half-normal law.
DistributionResult darling_kac(const GeneralizedBoole& map, const Interval& target,
                               long long horizon, long long samples,
                               const SeededSampler& sampler);

// Same statistic started from an arbitrary initial sampler (the limit law is
// the same for every absolutely continuous initial distribution).
template <typename StartSampler>
DistributionResult darling_kac_from(const GeneralizedBoole& map, const Interval& target,
                                    long long horizon, long long samples,
                                    const SeededSampler& sampler, StartSampler&& start);

// Occupation fraction of one unbounded side beyond the core interval,
// S_n(A)/n with A = (z^+, inf) (side +1) or (-inf, z^-) (side -1), against the
// arcsine law.
DistributionResult arcsine_occupation(const GeneralizedBoole& map, int side, long long horizon,
                                      long long samples, const SeededSampler& sampler);

// Last-visit fraction Z_n(E)/n against the arcsine law.
DistributionResult arcsine_last_visit(const GeneralizedBoole& map, const Interval& target,
                                      long long horizon, long long samples,
                                      const SeededSampler& sampler);

// --- wandering rate -----------------------------------------------------------

struct WanderingRateResult {
  std::vector<double> w;  // w[n] for n = 0..n_max, with w[0] = 0
  long long samples = 0;
  long long censored = 0;
};

// w_n(E) = sum_{k<n} mu(E intersect {tau > k}), estimated by mu-uniform
// sampling on E.
WanderingRateResult wandering_rate(const GeneralizedBoole& map, const Interval& target,
                                   long long n_max, long long samples,
                                   const SeededSampler& sampler);

// --- Hopf ratios ----------------------------------------------------------------

struct HopfRatioResult {
  EmpiricalDistribution ratios;  // S_n(E)/S_n(F) per orbit
  double median = 0;
  long long excluded = 0;  // orbits with S_n(F) = 0
  long long resampled = 0;
};

HopfRatioResult hopf_ratio(const GeneralizedBoole& map, const Interval& target_e,
                           const Interval& target_f, long long horizon, long long samples,
                           const SeededSampler& sampler);

// --- implementation of the templated driver -------------------------------------

namespace detail {
constexpr long long kRetryStride = 16;

template <typename Body>
void run_resampled(const SeededSampler& sampler, long long index, long long& resampled,
                   Body&& body) {
  for (long long attempt = 0; attempt < kRetryStride; ++attempt) {
    RandomStream rs = sampler.stream(static_cast<std::uint64_t>(index * kRetryStride + attempt));
    if (body(rs)) return;
    ++resampled;
  }
  throw OrbitTruncated("orbit repeatedly truncated; pole guard too wide?");
}
}  // namespace detail

template <typename StartSampler>
DistributionResult darling_kac_from(const GeneralizedBoole& map, const Interval& target,
                                    long long horizon, long long samples,
                                    const SeededSampler& sampler, StartSampler&& start) {
  if (horizon < 1) throw std::invalid_argument("darling_kac: horizon must be >= 1");
  double mass = mu_interval(target);
  if (!(mass > 0.0)) throw std::invalid_argument("darling_kac: target must have mu(E) > 0");
  std::vector<double> values(static_cast<std::size_t>(samples));
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);
  double scale = M_PI / (std::sqrt(2.0 * static_cast<double>(horizon)) * mass);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[i],
                            [&](RandomStream& rs) {
                              double x = start(rs);
                              if (map.near_pole(x)) return false;
                              long long count = 0;
                              for (long long k = 0; k < horizon; ++k) {
                                if (target.contains(x)) ++count;
                                if (k + 1 < horizon) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                }
                              }
                              values[i] = scale * static_cast<double>(count);
                              return true;
                            });
    }
  });
  DistributionResult out;
  out.dist = EmpiricalDistribution(std::move(values));
  out.ks = out.dist.ks_distance(half_normal_pi_cdf);
  for (long long r : resampled_per) out.resampled += r;
  return out;
}

}  // namespace booledyn

#endif
