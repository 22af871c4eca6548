#include "booledyn/orbitstats.hpp"

#include <algorithm>
#include <cmath>

namespace booledyn {

namespace {

std::vector<long long> merge_histograms(std::vector<std::vector<long long>>& parts) {
  std::size_t width = 0;
  for (const auto& h : parts) width = std::max(width, h.size());
  std::vector<long long> total(width, 0);
  for (const auto& h : parts)
    for (std::size_t i = 0; i < h.size(); ++i) total[i] += h[i];
  return total;
}

}  // namespace

OccupationGrowthResult occupation_growth(const GeneralizedBoole& map, const Interval& target,
                                         double epsilon,
                                         const std::vector<long long>& horizons,
                                         long long samples, const SeededSampler& sampler) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5))
    throw std::invalid_argument("occupation_growth: epsilon must lie in (0, 1/2)");
  for (std::size_t i = 0; i + 1 < horizons.size(); ++i)
    if (!(horizons[i] < horizons[i + 1]))
      throw std::invalid_argument("occupation_growth: horizons must increase");
  OccupationGrowthResult out;
  out.epsilon = epsilon;
  if (samples == 0 || horizons.empty()) return out;

  std::size_t h_count = horizons.size();
  std::vector<std::vector<double>> values(h_count,
                                          std::vector<double>(static_cast<std::size_t>(samples)));
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);
  long long max_horizon = horizons.back();

  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[i],
                            [&](RandomStream& rs) {
                              double x = rs.cauchy();
                              if (map.near_pole(x)) return false;
                              long long visits = 0;
                              std::size_t next_checkpoint = 0;
                              for (long long k = 0; k < max_horizon; ++k) {
                                if (target.contains(x)) ++visits;
                                while (next_checkpoint < h_count &&
                                       k + 1 == horizons[next_checkpoint]) {
                                  values[next_checkpoint][i] = static_cast<double>(visits);
                                  ++next_checkpoint;
                                }
                                if (k + 1 < max_horizon) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                }
                              }
                              return true;
                            });
    }
  });

  for (std::size_t h = 0; h < h_count; ++h) {
    double norm = std::pow(static_cast<double>(horizons[h]), 0.5 - epsilon);
    for (double& v : values[h]) v /= norm;
    EmpiricalDistribution dist(std::move(values[h]));
    OccupationGrowthRow row;
    row.horizon = horizons[h];
    row.q10 = dist.quantile(0.10);
    row.q25 = dist.quantile(0.25);
    row.q50 = dist.quantile(0.50);
    row.q75 = dist.quantile(0.75);
    row.q90 = dist.quantile(0.90);
    row.mean = dist.mean();
    out.rows.push_back(row);
  }
  for (long long r : resampled_per) out.resampled += r;
  return out;
}

ReturnTailResult return_time_tail(const GeneralizedBoole& map, const Interval& target,
                                  long long samples, const SeededSampler& sampler,
                                  long long bin_lo, long long bin_hi, long long track_cap) {
  if (samples < 1) throw std::invalid_argument("return_time_tail: need samples >= 1");
  if (bin_lo < 1 || bin_hi <= bin_lo || track_cap < bin_hi)
    throw std::invalid_argument("return_time_tail: bad bin layout");

  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  std::size_t chunk = (static_cast<std::size_t>(samples) + workers - 1) / workers;
  std::size_t n_chunks = (static_cast<std::size_t>(samples) + chunk - 1) / chunk;
  std::vector<std::vector<long long>> histograms(
      n_chunks, std::vector<long long>(static_cast<std::size_t>(track_cap) + 2, 0));
  std::vector<long long> resampled_per(n_chunks, 0);

  parallel_for(n_chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      std::size_t begin = c * chunk;
      std::size_t end = std::min(static_cast<std::size_t>(samples), begin + chunk);
      auto& hist = histograms[c];
      for (std::size_t i = begin; i < end; ++i) {
        detail::run_resampled(
            sampler, static_cast<long long>(i), resampled_per[c], [&](RandomStream& rs) {
              // Condition the lambda-sample into the target by rejection.
              double x0;
              do {
                x0 = rs.cauchy();
              } while (!target.contains(x0) || map.near_pole(x0));
              double x = x0;
              for (long long t = 1; t <= track_cap; ++t) {
                x = map.next_point(x);
                if (std::isnan(x)) return false;
                if (target.contains(x)) {
                  ++hist[static_cast<std::size_t>(t)];
                  return true;
                }
              }
              ++hist[static_cast<std::size_t>(track_cap) + 1];  // censored
              return true;
            });
      }
    }
  });

  ReturnTailResult out;
  out.samples = samples;
  out.histogram = merge_histograms(histograms);
  out.censored = out.histogram.back();
  out.histogram.pop_back();
  for (long long r : resampled_per) out.resampled += r;

  double target_mass = lambda_interval(target);
  out.lambda_first = target_mass * static_cast<double>(out.histogram[1]) /
                     static_cast<double>(samples);

  std::vector<double> log_n, log_mass;
  for (long long lo = bin_lo; lo < bin_hi; lo *= 2) {
    long long hi = lo * 2;
    TailBin bin;
    bin.lo = lo;
    bin.hi = hi;
    for (long long t = lo; t < hi; ++t) bin.count += out.histogram[static_cast<std::size_t>(t)];
    if (bin.count < 100)
      throw InsufficientSamples("return_time_tail: bin [" + std::to_string(lo) + "," +
                                std::to_string(hi) + ") has " + std::to_string(bin.count) +
                                " events");
    bin.abscissa = std::sqrt(static_cast<double>(lo) * static_cast<double>(hi));
    bin.mass_per_n = target_mass * static_cast<double>(bin.count) /
                     (static_cast<double>(samples) * static_cast<double>(hi - lo));
    out.bins.push_back(bin);
    log_n.push_back(std::log(bin.abscissa));
    log_mass.push_back(std::log(bin.mass_per_n));
  }
  out.slope = least_squares_slope(log_n, log_mass);
  return out;
}

EscapeTailResult escape_time_tail(const GeneralizedBoole& map, long long n_max, long long fit_lo,
                                  long long fit_hi) {
  if (n_max < 2) throw std::invalid_argument("escape_time_tail: need n_max >= 2");
  auto plus = map.backward_parabolic_orbit(+1, static_cast<int>(n_max) + 1);
  auto minus = map.backward_parabolic_orbit(-1, static_cast<int>(n_max) + 1);
  const double inf = std::numeric_limits<double>::infinity();

  EscapeTailResult out;
  out.first_mass = lambda_interval(-inf, minus[1]) + lambda_interval(plus[1], inf);

  // Log-spaced sample of n, 12 per decade, always including 1 and n_max.
  std::vector<long long> ns;
  ns.push_back(1);
  for (int j = 1;; ++j) {
    long long n = static_cast<long long>(std::llround(std::pow(10.0, j / 12.0)));
    if (n >= n_max) break;
    if (n > ns.back()) ns.push_back(n);
  }
  ns.push_back(n_max);

  std::vector<double> fit_x, fit_y;
  for (long long n : ns) {
    double mass = lambda_interval(-inf, minus[static_cast<std::size_t>(n)]) +
                  lambda_interval(plus[static_cast<std::size_t>(n)], inf);
    out.n_values.push_back(n);
    out.mass.push_back(mass);
    out.sqrt_scaled.push_back(std::sqrt(static_cast<double>(n)) * mass);
    if (n >= fit_lo && n <= fit_hi) {
      fit_x.push_back(std::log(static_cast<double>(n)));
      fit_y.push_back(std::log(mass));
    }
  }
  out.slope = least_squares_slope(fit_x, fit_y);
  return out;
}

DistributionResult darling_kac(const GeneralizedBoole& map, const Interval& target,
                               long long horizon, long long samples,
                               const SeededSampler& sampler) {
  return darling_kac_from(map, target, horizon, samples, sampler,
                          [](RandomStream& rs) { return rs.cauchy(); });
}

DistributionResult arcsine_occupation(const GeneralizedBoole& map, int side, long long horizon,
                                      long long samples, const SeededSampler& sampler) {
  if (horizon < 1) throw std::invalid_argument("arcsine_occupation: horizon must be >= 1");
  if (side != 1 && side != -1)
    throw std::invalid_argument("arcsine_occupation: side must be +1 or -1");
  Interval core = map.core_interval();
  std::vector<double> values(static_cast<std::size_t>(samples));
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[i],
                            [&](RandomStream& rs) {
                              double x = rs.cauchy();
                              if (map.near_pole(x)) return false;
                              long long count = 0;
                              for (long long k = 0; k < horizon; ++k) {
                                if (side > 0 ? (x > core.hi) : (x < core.lo)) ++count;
                                if (k + 1 < horizon) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                }
                              }
                              values[i] = static_cast<double>(count) /
                                          static_cast<double>(horizon);
                              return true;
                            });
    }
  });
  DistributionResult out;
  out.dist = EmpiricalDistribution(std::move(values));
  out.ks = out.dist.ks_distance(arcsine_cdf);
  for (long long r : resampled_per) out.resampled += r;
  return out;
}

DistributionResult arcsine_last_visit(const GeneralizedBoole& map, const Interval& target,
                                      long long horizon, long long samples,
                                      const SeededSampler& sampler) {
  if (horizon < 1) throw std::invalid_argument("arcsine_last_visit: horizon must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(samples));
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[i],
                            [&](RandomStream& rs) {
                              double x = rs.cauchy();
                              if (map.near_pole(x)) return false;
                              long long last = 0;
                              for (long long k = 0; k < horizon; ++k) {
                                if (target.contains(x)) last = k + 1;
                                if (k + 1 < horizon) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                }
                              }
                              values[i] = static_cast<double>(last) /
                                          static_cast<double>(horizon);
                              return true;
                            });
    }
  });
  DistributionResult out;
  out.dist = EmpiricalDistribution(std::move(values));
  out.ks = out.dist.ks_distance(arcsine_cdf);
  for (long long r : resampled_per) out.resampled += r;
  return out;
}

WanderingRateResult wandering_rate(const GeneralizedBoole& map, const Interval& target,
                                   long long n_max, long long samples,
                                   const SeededSampler& sampler) {
  if (n_max < 1) throw std::invalid_argument("wandering_rate: need n_max >= 1");
  if (samples < 1) throw std::invalid_argument("wandering_rate: need samples >= 1");

  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  std::size_t chunk = (static_cast<std::size_t>(samples) + workers - 1) / workers;
  std::size_t n_chunks = (static_cast<std::size_t>(samples) + chunk - 1) / chunk;
  std::vector<std::vector<long long>> histograms(
      n_chunks, std::vector<long long>(static_cast<std::size_t>(n_max) + 2, 0));
  std::vector<long long> resampled_per(n_chunks, 0);

  parallel_for(n_chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      std::size_t begin = c * chunk;
      std::size_t end = std::min(static_cast<std::size_t>(samples), begin + chunk);
      auto& hist = histograms[c];
      for (std::size_t i = begin; i < end; ++i) {
        detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[c],
                              [&](RandomStream& rs) {
                                double x = rs.uniform(target.lo, target.hi);
                                if (map.near_pole(x)) return false;
                                for (long long t = 1; t <= n_max; ++t) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                  if (target.contains(x)) {
                                    ++hist[static_cast<std::size_t>(t)];
                                    return true;
                                  }
                                }
                                ++hist[static_cast<std::size_t>(n_max) + 1];
                                return true;
                              });
      }
    }
  });

  auto hist = merge_histograms(histograms);
  WanderingRateResult out;
  out.samples = samples;
  out.censored = hist.back();

  // survivors[k] = #{tau > k}; w_n = mu(E) * sum_{k<n} survivors[k]/samples.
  double mass = mu_interval(target);
  out.w.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  long long survivors = samples;
  double acc = 0.0;
  for (long long k = 0; k < n_max; ++k) {
    if (k > 0) survivors -= hist[static_cast<std::size_t>(k)];
    acc += static_cast<double>(survivors) / static_cast<double>(samples);
    out.w[static_cast<std::size_t>(k) + 1] = mass * acc;
  }
  return out;
}

HopfRatioResult hopf_ratio(const GeneralizedBoole& map, const Interval& target_e,
                           const Interval& target_f, long long horizon, long long samples,
                           const SeededSampler& sampler) {
  if (horizon < 1) throw std::invalid_argument("hopf_ratio: horizon must be >= 1");
  if (!(mu_interval(target_e) > 0.0) || !(mu_interval(target_f) > 0.0))
    throw std::invalid_argument("hopf_ratio: targets must have positive measure");
  std::vector<double> ratios(static_cast<std::size_t>(samples));
  std::vector<char> excluded(static_cast<std::size_t>(samples), 0);
  std::vector<long long> resampled_per(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      detail::run_resampled(sampler, static_cast<long long>(i), resampled_per[i],
                            [&](RandomStream& rs) {
                              double x = rs.cauchy();
                              if (map.near_pole(x)) return false;
                              long long count_e = 0, count_f = 0;
                              for (long long k = 0; k < horizon; ++k) {
                                if (target_e.contains(x)) ++count_e;
                                if (target_f.contains(x)) ++count_f;
                                if (k + 1 < horizon) {
                                  x = map.next_point(x);
                                  if (std::isnan(x)) return false;
                                }
                              }
                              if (count_f == 0) {
                                excluded[i] = 1;
                                ratios[i] = 0.0;
                              } else {
                                ratios[i] = static_cast<double>(count_e) /
                                            static_cast<double>(count_f);
                              }
                              return true;
                            });
    }
  });
  HopfRatioResult out;
  std::vector<double> kept;
  kept.reserve(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (excluded[i])
      ++out.excluded;
    else
      kept.push_back(ratios[i]);
  }
  if (kept.empty()) throw InsufficientSamples("hopf_ratio: every orbit missed F");
  out.ratios = EmpiricalDistribution(std::move(kept));
  out.median = out.ratios.median();
  for (long long r : resampled_per) out.resampled += r;
  return out;
}

}  // namespace booledyn
