#include "booledyn/circle_model.hpp"

#include <cmath>
#include <stdexcept>

#include "booledyn/empirical.hpp"
#include "booledyn/parallel.hpp"

namespace booledyn {

DigitOrbit::DigitOrbit(int d, RandomStream stream) : base_(d), stream_(stream) {
  if (d < 2) throw std::invalid_argument("DigitOrbit: degree must be >= 2");
  modulus_ = 1;
  while (modulus_ <= (1ULL << 63) / base_) modulus_ *= base_;
  top_divisor_ = modulus_ / base_;
  modulus_double_ = static_cast<double>(modulus_);
  seed_uniform();
}

void DigitOrbit::seed_uniform() { value_ = stream_.below(modulus_); }

void DigitOrbit::seed_uniform_on(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("DigitOrbit: bad arc");
  auto lo_int = static_cast<std::uint64_t>(std::ceil(lo * modulus_double_));
  auto hi_int = static_cast<std::uint64_t>(std::ceil(hi * modulus_double_));
  value_ = lo_int + stream_.below(hi_int - lo_int);
}

CircleModelResult circle_model_checks(int d, double arc_lo, double arc_hi,
                                      long long birkhoff_horizon, long long birkhoff_samples,
                                      const SeededSampler& sampler, long long kac_n_max,
                                      long long kac_samples, double g_halfwidth, int g_depth) {
  if (!(0.0 <= arc_lo && arc_lo < arc_hi && arc_hi <= 1.0))
    throw std::invalid_argument("circle_model_checks: bad arc");
  if (!(g_halfwidth > 0.0 && g_halfwidth < 0.5))
    throw std::invalid_argument("circle_model_checks: bad fixed-point arc");

  CircleModelResult out;
  out.arc_mass = arc_hi - arc_lo;

  // Birkhoff averages.
  SeededSampler birkhoff_sampler = sampler.fork("circle-birkhoff");
  std::vector<double> fractions(static_cast<std::size_t>(birkhoff_samples));
  parallel_for(static_cast<std::size_t>(birkhoff_samples),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   DigitOrbit orbit(d, birkhoff_sampler.stream(i));
                   long long visits = 0;
                   for (long long k = 0; k < birkhoff_horizon; ++k) {
                     if (orbit.in_arc(arc_lo, arc_hi)) ++visits;
                     if (k + 1 < birkhoff_horizon) orbit.step();
                   }
                   fractions[i] = static_cast<double>(visits) /
                                  static_cast<double>(birkhoff_horizon);
                 }
               });
  double mean = 0.0;
  for (double f : fractions) mean += f;
  mean /= static_cast<double>(birkhoff_samples);
  out.birkhoff_error = std::fabs(mean - out.arc_mass);

  // Return times from uniform starts inside the arc, for the Kac sum.
  SeededSampler kac_sampler = sampler.fork("circle-kac");
  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  std::size_t chunk = (static_cast<std::size_t>(kac_samples) + workers - 1) / workers;
  std::size_t n_chunks = (static_cast<std::size_t>(kac_samples) + chunk - 1) / chunk;
  std::vector<std::vector<long long>> histograms(
      n_chunks, std::vector<long long>(static_cast<std::size_t>(kac_n_max) + 2, 0));
  parallel_for(n_chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      std::size_t begin = c * chunk;
      std::size_t end = std::min(static_cast<std::size_t>(kac_samples), begin + chunk);
      auto& hist = histograms[c];
      for (std::size_t i = begin; i < end; ++i) {
        DigitOrbit orbit(d, kac_sampler.stream(i));
        orbit.seed_uniform_on(arc_lo, arc_hi);
        long long tau = kac_n_max + 1;
        for (long long t = 1; t <= kac_n_max; ++t) {
          orbit.step();
          if (orbit.in_arc(arc_lo, arc_hi)) {
            tau = t;
            break;
          }
        }
        ++hist[static_cast<std::size_t>(tau)];
      }
    }
  });
  double kac = 0.0;
  long long censored = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    for (long long t = 1; t <= kac_n_max; ++t)
      kac += static_cast<double>(t) * static_cast<double>(histograms[c][static_cast<std::size_t>(t)]);
    censored += histograms[c][static_cast<std::size_t>(kac_n_max) + 1];
  }
  out.kac_sum = out.arc_mass * kac / static_cast<double>(kac_samples);
  out.kac_censored = censored;

  // Survival arcs around the fixed point: G_n = G intersect g^-1(G_{n-1}).
  // For a symmetric arc the pullback at 0 is exactly the d-fold shrink, so the
  // recursion stays a symmetric arc and the decay is exactly geometric.
  double half = g_halfwidth;
  std::vector<double> log_mass;
  for (int k = 0; k <= g_depth; ++k) {
    out.survival_mass.push_back(2.0 * half);
    log_mass.push_back(std::log(2.0 * half));
    half = std::min(g_halfwidth, half / static_cast<double>(d));
  }
  std::vector<double> steps;
  for (int k = 0; k <= g_depth; ++k) steps.push_back(static_cast<double>(k));
  out.decay_rate = std::exp(least_squares_slope(steps, log_mass));
  return out;
}

}  // namespace booledyn
