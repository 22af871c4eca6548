#include "booledyn/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "booledyn/afncheck.hpp"
#include "booledyn/circle_model.hpp"
#include "booledyn/empirical.hpp"
#include "booledyn/errors.hpp"
#include "booledyn/expbaker.hpp"
#include "booledyn/measures.hpp"
#include "booledyn/orbitstats.hpp"
#include "booledyn/periodic.hpp"
#include "booledyn/version.hpp"

namespace booledyn::cli {

namespace {

using nlohmann::json;

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string fmt(double v) { return format_double(v); }

// One CSV artifact: fixed header, numeric cells in %.17g, no timestamps, so
// reruns with the same seed are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& dir, const std::string& name,
            const std::vector<std::string>& columns)
      : path_(dir + "/" + name) {
    std::filesystem::create_directories(dir);
    out_.open(path_);
    if (!out_) throw ConfigError("cannot open CSV artifact " + path_);
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

CriterionResult within(const std::string& name, double measured, double lo, double hi) {
  CriterionResult c;
  c.name = name;
  c.measured = measured;
  c.threshold = "[" + fmt(lo) + "," + fmt(hi) + "]";
  c.pass = measured >= lo && measured <= hi;
  return c;
}

CriterionResult at_most(const std::string& name, double measured, double bound) {
  CriterionResult c;
  c.name = name;
  c.measured = measured;
  c.threshold = "<=" + fmt(bound);
  c.pass = measured <= bound;
  return c;
}

CriterionResult truth(const std::string& name, bool ok) {
  CriterionResult c;
  c.name = name;
  c.measured = ok ? 1.0 : 0.0;
  c.threshold = "==1";
  c.pass = ok;
  return c;
}

Interval primary_target(const ExperimentConfig& cfg) {
  return Interval(cfg.target_lo, cfg.target_hi);
}

// ---------------------------------------------------------------------------
// individual experiments
// ---------------------------------------------------------------------------

void run_invariance(const ExperimentConfig& cfg, ExperimentResult& res) {
  struct Case {
    std::string name;
    GeneralizedBoole map;
  };
  std::vector<Case> cases;
  cases.push_back({"boole", GeneralizedBoole::boole()});
  cases.push_back({"gb4", GeneralizedBoole({-2.0, -1.0, 1.0, 2.0}, {1.0, 1.0, 1.0, 1.0})});

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"map", "index", "lo", "hi", "preimage_total", "rel_error"});
  SeededSampler sampler = SeededSampler(cfg.seed).fork("invariance");
  json stats;
  for (const auto& [name, map] : cases) {
    double worst = 0.0;
    RandomStream rs = sampler.fork(name).stream(0);
    for (long long i = 0; i < cfg.intervals; ++i) {
      double a = rs.cauchy(), b = rs.cauchy();
      if (a > b) std::swap(a, b);
      if (b - a < 1e-3) b = a + 1e-3;
      double total = 0.0;
      for (int br = 0; br < map.branch_count(); ++br)
        total += map.inverse_on_branch(br, b) - map.inverse_on_branch(br, a);
      double rel = std::fabs(total - (b - a)) / (b - a);
      worst = std::max(worst, rel);
      csv.row({name, std::to_string(i), fmt(a), fmt(b), fmt(total), fmt(rel)});
    }
    stats[name + "_max_rel_error"] = worst;
    res.criteria.push_back(at_most("preimage_length_matches_" + name, worst, 1e-8));
  }
  res.statistics = stats;
  res.artifacts.push_back(csv.path());
}

void run_returns(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("returns");
  ReturnTailResult tail = return_time_tail(map, primary_target(cfg), cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"bin_lo", "bin_hi", "count", "abscissa", "mass_per_n"});
  for (const auto& bin : tail.bins)
    csv.row({std::to_string(bin.lo), std::to_string(bin.hi), std::to_string(bin.count),
             fmt(bin.abscissa), fmt(bin.mass_per_n)});

  res.statistics = {{"slope", tail.slope},
                    {"lambda_first", tail.lambda_first},
                    {"samples", tail.samples},
                    {"censored", tail.censored},
                    {"resampled", tail.resampled}};
  if (cfg.statistical_criteria) {
    res.criteria.push_back(within("return_tail_slope", tail.slope, -1.65, -1.35));
    res.criteria.push_back(within("first_return_mass", tail.lambda_first, 0.1, 1.0));
  }
  res.artifacts.push_back(csv.path());
}

void run_escapes(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  EscapeTailResult tail =
      escape_time_tail(map, cfg.n_max, 100, std::min<long long>(cfg.n_max, 100000));

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"n", "mass", "sqrt_scaled"});
  double at_1e4 = 0, at_1e5 = 0;
  for (std::size_t i = 0; i < tail.n_values.size(); ++i) {
    csv.row({std::to_string(tail.n_values[i]), fmt(tail.mass[i]), fmt(tail.sqrt_scaled[i])});
    if (tail.n_values[i] == 10000) at_1e4 = tail.sqrt_scaled[i];
    if (tail.n_values[i] == 100000) at_1e5 = tail.sqrt_scaled[i];
  }

  res.statistics = {{"slope", tail.slope},
                    {"first_mass", tail.first_mass},
                    {"sqrt_scaled_1e4", at_1e4},
                    {"sqrt_scaled_1e5", at_1e5}};
  res.criteria.push_back(
      at_most("first_escape_mass_exact", std::fabs(tail.first_mass - 0.5), 1e-15));
  res.criteria.push_back(within("escape_tail_slope", tail.slope, -0.55, -0.45));
  if (at_1e4 > 0 && at_1e5 > 0)
    res.criteria.push_back(
        at_most("sqrt_scaled_stability", std::fabs(at_1e5 / at_1e4 - 1.0), 0.05));
  res.artifacts.push_back(csv.path());
}

void run_occupation(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("occupation");
  OccupationGrowthResult growth = occupation_growth(map, primary_target(cfg), cfg.epsilon,
                                                    cfg.horizons, cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"horizon", "q10", "q25", "q50", "q75", "q90", "mean"});
  for (const auto& row : growth.rows)
    csv.row({std::to_string(row.horizon), fmt(row.q10), fmt(row.q25), fmt(row.q50),
             fmt(row.q75), fmt(row.q90), fmt(row.mean)});

  json q10s = json::array();
  for (const auto& row : growth.rows) q10s.push_back(row.q10);
  res.statistics = {{"q10", q10s}, {"resampled", growth.resampled}};
  if (cfg.statistical_criteria) {
    for (std::size_t i = 0; i + 1 < growth.rows.size(); ++i) {
      res.criteria.push_back(truth(
          "q10_increases_" + std::to_string(growth.rows[i].horizon) + "_to_" +
              std::to_string(growth.rows[i + 1].horizon),
          growth.rows[i + 1].q10 > growth.rows[i].q10));
    }
  }
  res.artifacts.push_back(csv.path());
}

void write_distribution_csv(CsvWriter& csv, const EmpiricalDistribution& dist,
                            const std::function<double(double)>& ref) {
  const auto& v = dist.values();
  std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    double ecdf = static_cast<double>(i + 1) / static_cast<double>(n);
    csv.row({fmt(v[i]), fmt(ecdf), fmt(ref(v[i]))});
  }
}

void run_darling_kac(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("darling-kac");
  DistributionResult dk =
      darling_kac(map, primary_target(cfg), cfg.horizon, cfg.samples, sampler);

  // The limit is a strong distributional one: any absolutely continuous
  // initial law must give the same answer. Smoke-check with a truncated
  // Gaussian start.
  SeededSampler alt = sampler.fork("nu-independence");
  DistributionResult dk_alt =
      darling_kac_from(map, primary_target(cfg), cfg.horizon, cfg.samples, alt,
                       [](RandomStream& rs) {
                         double z;
                         do {
                           z = rs.normal();
                         } while (std::fabs(z) > 3.0);
                         return z;
                       });

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"value", "ecdf", "reference_cdf"});
  write_distribution_csv(csv, dk.dist, half_normal_pi_cdf);

  res.statistics = {{"ks", dk.ks},
                    {"ks_truncated_gaussian_start", dk_alt.ks},
                    {"resampled", dk.resampled}};
  if (cfg.statistical_criteria) {
    res.criteria.push_back(at_most("darling_kac_ks", dk.ks, 0.05));
    res.criteria.push_back(at_most("nu_independence_smoke_ks", dk_alt.ks, 0.05));
  }
  res.artifacts.push_back(csv.path());
}

void run_arcsine_occ(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("arcsine-occ");
  DistributionResult law = arcsine_occupation(map, cfg.side, cfg.horizon, cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"value", "ecdf", "reference_cdf"});
  write_distribution_csv(csv, law.dist, arcsine_cdf);

  double mean = law.dist.mean();
  res.statistics = {{"ks", law.ks}, {"mean", mean}, {"resampled", law.resampled}};
  if (cfg.statistical_criteria) {
    res.criteria.push_back(at_most("arcsine_occupation_ks", law.ks, 0.05));
    res.criteria.push_back(within("occupation_fraction_mean", mean, 0.47, 0.53));
  }
  res.artifacts.push_back(csv.path());
}

void run_arcsine_last(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("arcsine-last");
  DistributionResult law =
      arcsine_last_visit(map, primary_target(cfg), cfg.horizon, cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"value", "ecdf", "reference_cdf"});
  write_distribution_csv(csv, law.dist, arcsine_cdf);

  res.statistics = {{"ks", law.ks},
                    {"median", law.dist.median()},
                    {"resampled", law.resampled}};
  if (cfg.statistical_criteria)
    res.criteria.push_back(at_most("arcsine_last_visit_ks", law.ks, 0.05));
  res.artifacts.push_back(csv.path());
}

void run_wandering(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("wandering");
  WanderingRateResult rate =
      wandering_rate(map, primary_target(cfg), cfg.n_max, cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"n", "w", "w_over_sqrt_n"});
  for (long long n = 1; n <= cfg.n_max; n *= 10) {
    double w = rate.w[static_cast<std::size_t>(n)];
    csv.row({std::to_string(n), fmt(w), fmt(w / std::sqrt(static_cast<double>(n)))});
  }

  auto scaled = [&](long long n) {
    return rate.w[static_cast<std::size_t>(n)] / std::sqrt(static_cast<double>(n));
  };
  res.statistics = {{"w1", rate.w[1]}, {"censored", rate.censored}};
  res.criteria.push_back(
      at_most("w1_equals_target_mass",
              std::fabs(rate.w[1] - mu_interval(primary_target(cfg))), 1e-12));
  if (cfg.statistical_criteria && cfg.n_max >= 10000) {
    double drift = std::fabs(scaled(10000) / scaled(1000) - 1.0);
    res.statistics["ratio_drift"] = drift;
    res.criteria.push_back(at_most("wandering_rate_sqrt_n_drift", drift, 0.10));
  }
  res.artifacts.push_back(csv.path());
}

void run_hopf(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  SeededSampler sampler = SeededSampler(cfg.seed).fork("hopf");
  HopfRatioResult hopf = hopf_ratio(map, primary_target(cfg),
                                    Interval(cfg.second_lo, cfg.second_hi), cfg.horizon,
                                    cfg.samples, sampler);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"ratio"});
  for (double r : hopf.ratios.values()) csv.row({fmt(r)});

  res.statistics = {{"median", hopf.median},
                    {"excluded", hopf.excluded},
                    {"resampled", hopf.resampled}};
  if (cfg.statistical_criteria)
    res.criteria.push_back(within("hopf_median_ratio", hopf.median, 1.9, 2.1));
  res.artifacts.push_back(csv.path());
}

void run_periodic(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"center", "point", "period", "bound", "residual", "certificate_length",
                 "min_pole_distance"});

  // The known 2-cycle of the Boole map.
  PeriodicSearchResult two_cycle = find_periodic(map, cfg.center, cfg.radius);
  csv.row({fmt(cfg.center), fmt(two_cycle.point), std::to_string(two_cycle.period),
           fmt(two_cycle.bound), fmt(two_cycle.residual), fmt(two_cycle.certificate_length),
           fmt(two_cycle.min_pole_distance)});
  res.criteria.push_back(at_most("two_cycle_residual", two_cycle.residual, 1e-10));
  res.criteria.push_back(at_most("two_cycle_point_error",
                                 std::fabs(std::fabs(two_cycle.point) - kInvSqrt2), 1e-9));
  res.criteria.push_back(
      truth("two_cycle_period_within_bound",
            static_cast<double>(two_cycle.period) <= two_cycle.bound));

  // Density proxy: cycles near lambda-sampled centers.
  SeededSampler sampler = SeededSampler(cfg.seed).fork("periodic");
  RandomStream rs = sampler.stream(0);
  long long successes = 0;
  double worst_scaled_residual = 0.0;
  bool bounds_ok = true;
  for (long long i = 0; i < cfg.centers; ++i) {
    double center = rs.cauchy();
    try {
      PeriodicSearchResult found = find_periodic(map, center, cfg.radius);
      ++successes;
      bounds_ok = bounds_ok && (static_cast<double>(found.period) <= found.bound);
      worst_scaled_residual =
          std::max(worst_scaled_residual,
                   found.residual / std::max(1.0, std::fabs(found.point)));
      csv.row({fmt(center), fmt(found.point), std::to_string(found.period), fmt(found.bound),
               fmt(found.residual), fmt(found.certificate_length),
               fmt(found.min_pole_distance)});
    } catch (const SearchExhausted&) {
      csv.row({fmt(center), "nan", "0", "0", "inf", "0", "0"});
    }
  }
  json search{{"center", cfg.center},
              {"radius", cfg.radius},
              {"point", two_cycle.point},
              {"point_correction", two_cycle.point_correction},
              {"period", two_cycle.period},
              {"residual", two_cycle.residual},
              {"bound", two_cycle.bound},
              {"certificate_length", two_cycle.certificate_length},
              {"min_pole_distance", two_cycle.min_pole_distance}};
  if (two_cycle.branch_word.size() <= 100) search["branch_word"] = two_cycle.branch_word;
  res.statistics = {{"search", search},
                    {"sampled_centers", cfg.centers},
                    {"successes", successes},
                    {"worst_scaled_residual", worst_scaled_residual}};
  res.criteria.push_back(truth("sampled_centers_all_found", successes == cfg.centers));
  res.criteria.push_back(truth("sampled_centers_within_bound", bounds_ok));
  res.criteria.push_back(
      at_most("sampled_centers_worst_residual", worst_scaled_residual, 1e-10));
  res.artifacts.push_back(csv.path());
}

void run_mapping(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  MappingPropertiesReport report = check_mapping_properties(map, cfg.grid, cfg.radius);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"clause", "value", "bound", "pass"});
  csv.row({"core_derivative", fmt(report.min_core_derivative),
           fmt(report.core_derivative_threshold), report.derivative_ok ? "1" : "0"});
  csv.row({"passage_steps", std::to_string(report.worst_passage_steps), "per_point_x2_over_c",
           report.passage_ok ? "1" : "0"});
  csv.row({"escape_steps", std::to_string(report.worst_escape_steps),
           std::to_string(report.escape_bound), report.escape_ok ? "1" : "0"});

  res.statistics = {{"min_core_derivative", report.min_core_derivative},
                    {"worst_passage_steps", report.worst_passage_steps},
                    {"worst_escape_steps", report.worst_escape_steps},
                    {"escape_bound", report.escape_bound}};
  res.criteria.push_back(truth("core_expansion_clause", report.derivative_ok));
  res.criteria.push_back(truth("passage_clause", report.passage_ok));
  res.criteria.push_back(truth("excursion_clause", report.escape_ok));
  res.artifacts.push_back(csv.path());
}

void run_afn_check(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  double p = choose_p(map, cfg.k_target);
  AfnReport coarse = verify_afn(map, p, cfg.grid);
  AfnReport fine = verify_afn(map, p, cfg.grid * 10);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"grid", "expansion_core", "expansion_off_ends", "adler_sup",
                 "exponent_fit_left", "exponent_fit_right"});
  csv.row({std::to_string(cfg.grid), fmt(coarse.expansion_core),
           fmt(coarse.expansion_off_ends), fmt(coarse.adler_sup),
           fmt(coarse.exponent_fit_left), fmt(coarse.exponent_fit_right)});
  csv.row({std::to_string(cfg.grid * 10), fmt(fine.expansion_core),
           fmt(fine.expansion_off_ends), fmt(fine.adler_sup), fmt(fine.exponent_fit_left),
           fmt(fine.exponent_fit_right)});

  double adler_drift = std::fabs(fine.adler_sup / coarse.adler_sup - 1.0);
  res.statistics = {{"p", p},
                    {"expansion_core", fine.expansion_core},
                    {"adler_sup", fine.adler_sup},
                    {"adler_drift", adler_drift},
                    {"exponent_fit_left", fine.exponent_fit_left},
                    {"exponent_fit_right", fine.exponent_fit_right},
                    {"branch_count", fine.branch_count},
                    {"alpha", fine.alpha},
                    {"beta", fine.beta}};
  res.criteria.push_back(truth("expansion_certificate",
                               fine.expansion_core >= cfg.k_target));
  res.criteria.push_back(
      at_most("parabolic_exponent_right", std::fabs(fine.exponent_fit_right - 3.0), 0.2));
  res.criteria.push_back(
      at_most("parabolic_exponent_left", std::fabs(fine.exponent_fit_left - 3.0), 0.2));
  res.criteria.push_back(at_most("adler_sup_grid_stability", adler_drift, 0.10));
  res.artifacts.push_back(csv.path());
}

void run_distortion(const ExperimentConfig& cfg, ExperimentResult& res) {
  GeneralizedBoole map = cfg.map.build_generalized();
  Interval e(cfg.second_lo, cfg.second_hi);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"depth", "cylinders", "skipped", "min_ratio", "max_ratio", "bound",
                 "truncated_mass"});
  std::vector<DistortionReport> reports;
  for (int d = 1; d <= cfg.depth; ++d) {
    DistortionReport rep = distortion_estimate(map, d, e, cfg.rung_cap);
    reports.push_back(rep);
    csv.row({std::to_string(d), std::to_string(rep.cylinder_count),
             std::to_string(rep.skipped_unreachable), fmt(rep.min_ratio), fmt(rep.max_ratio),
             fmt(rep.bound_estimate), fmt(rep.truncated_mass)});
  }

  const DistortionReport& deepest = reports.back();
  bool ratios_ok = true;
  for (const auto& rep : reports)
    ratios_ok = ratios_ok && rep.min_ratio > 0.0 && std::isfinite(rep.max_ratio);
  res.statistics = {{"bound_deepest", deepest.bound_estimate},
                    {"cylinders_deepest", deepest.cylinder_count}};
  res.criteria.push_back(truth("cylinder_ratios_bounded", ratios_ok));
  if (cfg.depth >= 4) {
    double growth = reports[3].bound_estimate / reports[2].bound_estimate - 1.0;
    res.statistics["depth3_to_4_growth"] = growth;
    res.criteria.push_back(at_most("bound_growth_depth3_to_4", growth, 0.5));
  }
  res.artifacts.push_back(csv.path());
}

void run_identities(const ExperimentConfig& cfg, ExperimentResult& res) {
  IdentityReport report = inner_function_identities(cfg.grid);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"check", "value"});
  csv.row({"max_defect", fmt(report.max_defect)});
  csv.row({"value_at_zero_defect", fmt(report.value_at_zero_defect)});
  csv.row({"fixed_point_defect", fmt(report.fixed_point_defect)});
  csv.row({"derivative_defect", fmt(report.derivative_defect)});
  csv.row({"second_derivative_defect", fmt(report.second_derivative_defect)});
  csv.row({"cubic_ratio", fmt(report.cubic_ratio)});

  res.statistics = {{"max_defect", report.max_defect},
                    {"grid_points", report.grid_points},
                    {"cubic_ratio", report.cubic_ratio}};
  res.criteria.push_back(at_most("conjugacy_identity_defect", report.max_defect, 1e-12));
  res.criteria.push_back(
      at_most("inner_function_value_at_zero", report.value_at_zero_defect, 1e-15));
  res.criteria.push_back(at_most("fixed_point_defect", report.fixed_point_defect, 1e-14));
  res.criteria.push_back(at_most("derivative_defect", report.derivative_defect, 1e-8));
  res.criteria.push_back(
      at_most("second_derivative_defect", report.second_derivative_defect, 1e-6));
  res.criteria.push_back(truth("cubic_ratio_finite_nonzero",
                               report.cubic_ratio > 1e-3 && report.cubic_ratio < 1e3));
  res.artifacts.push_back(csv.path());
}

void run_codes(const ExperimentConfig& cfg, ExperimentResult& res) {
  SeededSampler sampler = SeededSampler(cfg.seed).fork("codes");
  long long m_hi = std::min<long long>(512, std::max<long long>(16, cfg.horizon / 16));
  BlockStatisticsResult blocks = block_statistics(cfg.samples, cfg.horizon, sampler, 8, m_hi);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"first_block_min", "survival_fraction"});
  for (std::size_t i = 0; i < blocks.survival_m.size(); ++i)
    csv.row({std::to_string(blocks.survival_m[i]), fmt(blocks.survival_fraction[i])});

  res.statistics = {{"h_slope", blocks.h_slope},
                    {"b_ks", blocks.b_ks},
                    {"l_ks", blocks.l_ks},
                    {"consistency_ok", blocks.consistency_ok},
                    {"resampled", blocks.resampled}};
  res.criteria.push_back(truth("block_count_matches_occupation", blocks.consistency_ok));
  if (cfg.statistical_criteria) {
    res.criteria.push_back(within("first_block_tail_slope", blocks.h_slope, -0.6, -0.4));
    res.criteria.push_back(at_most("block_count_ks", blocks.b_ks, 0.05));
    res.criteria.push_back(at_most("last_block_ks", blocks.l_ks, 0.05));
  }
  res.artifacts.push_back(csv.path());
}

void run_hairs(const ExperimentConfig& cfg, ExperimentResult& res) {
  StripMap strip(1);
  SeededSampler sampler = SeededSampler(cfg.seed).fork("hairs");

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv",
                {"code_index", "psum_half", "psum_full", "landing_gap", "fitted_contraction"});
  long long landed = 0, contracting = 0, attempted = 0;
  std::vector<std::string> trace_artifact;
  for (long long i = 0; i < cfg.samples; ++i) {
    RandomStream rs = sampler.stream(static_cast<std::uint64_t>(i));
    double x0 = rs.cauchy();
    SymbolCode code;
    try {
      code = code_from_boole_orbit(x0, cfg.horizon);
    } catch (const OrbitTruncated&) {
      continue;  // resample implicitly by skipping; counted as attempted below
    }
    ++attempted;
    HairTrace trace;
    try {
      trace = hair_contraction(strip, code, Disk{});
    } catch (const NoConvergence&) {
      csv.row({std::to_string(i), "nan", "nan", "inf", "0"});
      continue;
    }
    std::size_t half = code.bits.size() / 2;
    double ps_half = trace.partial_sums[half];
    double ps_full = trace.partial_sums.back();
    double gap = std::fabs(ps_full - ps_half) / ps_full;
    if (gap < 0.01) ++landed;
    if (trace.fitted_contraction > 1.0) ++contracting;
    csv.row({std::to_string(i), fmt(ps_half), fmt(ps_full), fmt(gap),
             fmt(trace.fitted_contraction)});

    if (i == 0) {
      CsvWriter full(cfg.out_dir, cfg.experiment + "_trace0.csv",
                     {"k", "diameter", "partial_sum", "center_re", "center_im"});
      for (std::size_t k = 0; k < trace.diameters.size(); ++k)
        full.row({std::to_string(k), fmt(trace.diameters[k]), fmt(trace.partial_sums[k]),
                  fmt(trace.centers[k].real()), fmt(trace.centers[k].imag())});
      trace_artifact.push_back(full.path());
    }
  }
  double landed_frac = attempted ? static_cast<double>(landed) / attempted : 0.0;
  double contracting_frac = attempted ? static_cast<double>(contracting) / attempted : 0.0;
  res.statistics = {{"attempted", attempted},
                    {"landing_fraction", landed_frac},
                    {"contracting_fraction", contracting_frac}};
  if (cfg.statistical_criteria) {
    res.criteria.push_back(within("hair_landing_fraction", landed_frac, 0.95, 1.0));
    res.criteria.push_back(within("hair_contraction_fraction", contracting_frac, 0.95, 1.0));
  }
  res.artifacts.push_back(csv.path());
  for (auto& a : trace_artifact) res.artifacts.push_back(a);
}

void run_circle_model(const ExperimentConfig& cfg, ExperimentResult& res) {
  SeededSampler sampler = SeededSampler(cfg.seed).fork("circle-model");
  CircleModelResult model =
      circle_model_checks(cfg.degree, cfg.arc_lo, cfg.arc_hi, cfg.horizon, cfg.samples,
                          sampler, cfg.kac_n_max, cfg.kac_samples, cfg.g_halfwidth);

  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"quantity", "value"});
  csv.row({"arc_mass", fmt(model.arc_mass)});
  csv.row({"birkhoff_error", fmt(model.birkhoff_error)});
  csv.row({"kac_sum", fmt(model.kac_sum)});
  csv.row({"decay_rate", fmt(model.decay_rate)});

  res.statistics = {{"birkhoff_error", model.birkhoff_error},
                    {"kac_sum", model.kac_sum},
                    {"kac_censored", model.kac_censored},
                    {"decay_rate", model.decay_rate}};
  if (cfg.statistical_criteria) {
    res.criteria.push_back(at_most("birkhoff_error", model.birkhoff_error, 0.01));
    res.criteria.push_back(within("kac_sum", model.kac_sum, 0.45, 0.55));
  }
  res.criteria.push_back(at_most(
      "waiting_decay_rate_exact",
      std::fabs(model.decay_rate - 1.0 / cfg.degree), 1e-12));
  res.artifacts.push_back(csv.path());
}

void run_simulate(const ExperimentConfig& cfg, ExperimentResult& res) {
  CsvWriter csv(cfg.out_dir, cfg.experiment + ".csv", {"step", "x", "in_target"});
  Interval target = primary_target(cfg);
  std::vector<double> points;
  if (cfg.map.kind == "cotangent") {
    CotangentMap map;
    points = orbit_trace(map, cfg.x0, cfg.horizon);
  } else {
    GeneralizedBoole map = cfg.map.build_generalized();
    points = orbit_trace(map, cfg.x0, cfg.horizon);
  }
  for (std::size_t k = 0; k < points.size(); ++k)
    csv.row({std::to_string(k), fmt(points[k]), target.contains(points[k]) ? "1" : "0"});
  res.statistics = {{"steps_completed", points.size()},
                    {"truncated", static_cast<long long>(points.size()) < cfg.horizon}};
  res.criteria.push_back(truth("orbit_produced", !points.empty()));
  res.artifacts.push_back(csv.path());
}

}  // namespace

// ---------------------------------------------------------------------------
// config plumbing
// ---------------------------------------------------------------------------

GeneralizedBoole MapSpec::build_generalized() const {
  if (kind == "boole") return GeneralizedBoole::boole();
  if (kind == "generalized_boole") return GeneralizedBoole(poles, weights);
  throw ConfigError("map kind '" + kind + "' is not usable for this experiment");
}

json MapSpec::to_json() const {
  json j;
  j["kind"] = kind;
  if (!poles.empty()) j["poles"] = poles;
  if (!weights.empty()) j["weights"] = weights;
  return j;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["map"] = map.to_json();
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["horizon"] = horizon;
  j["samples"] = samples;
  j["horizons"] = horizons;
  j["epsilon"] = epsilon;
  j["target"] = {target_lo, target_hi};
  j["second_target"] = {second_lo, second_hi};
  j["side"] = side;
  j["n_max"] = n_max;
  j["intervals"] = intervals;
  j["x0"] = x0;
  j["center"] = center;
  j["radius"] = radius;
  j["centers"] = centers;
  j["depth"] = depth;
  j["rung_cap"] = rung_cap;
  j["k_target"] = k_target;
  j["grid"] = grid;
  j["degree"] = degree;
  j["arc"] = {arc_lo, arc_hi};
  j["kac_samples"] = kac_samples;
  j["kac_n_max"] = kac_n_max;
  j["g_halfwidth"] = g_halfwidth;
  j["mode"] = mode;
  j["statistical_criteria"] = statistical_criteria;
  return j;
}

ExperimentConfig parse_config(const json& j) {
  static const std::set<std::string> known{
      "experiment", "map",       "seed",    "out_dir",     "horizon",     "samples",
      "horizons",   "epsilon",   "target",  "second_target", "side",      "n_max",
      "intervals",  "x0",        "center",  "radius",      "centers",     "depth",
      "rung_cap",   "k_target",  "grid",    "degree",      "arc",         "kac_samples",
      "kac_n_max",  "g_halfwidth", "mode",  "statistical_criteria"};
  static const std::set<std::string> known_map{"kind", "poles", "weights"};

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  if (!j.contains("experiment")) throw ConfigError("missing config key 'experiment'");
  cfg.experiment = j.at("experiment").get<std::string>();
  if (j.contains("map")) {
    const json& m = j.at("map");
    for (const auto& [key, value] : m.items()) {
      (void)value;
      if (!known_map.count(key)) throw ConfigError("unknown map key '" + key + "'");
    }
    if (m.contains("kind")) cfg.map.kind = m.at("kind").get<std::string>();
    if (m.contains("poles")) cfg.map.poles = m.at("poles").get<std::vector<double>>();
    if (m.contains("weights")) cfg.map.weights = m.at("weights").get<std::vector<double>>();
  }
  auto get_ll = [&](const char* key, long long& slot) {
    if (j.contains(key)) slot = j.at(key).get<long long>();
  };
  auto get_d = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = j.at(key).get<double>();
  };
  auto get_i = [&](const char* key, int& slot) {
    if (j.contains(key)) slot = j.at(key).get<int>();
  };
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  get_ll("horizon", cfg.horizon);
  get_ll("samples", cfg.samples);
  if (j.contains("horizons")) cfg.horizons = j.at("horizons").get<std::vector<long long>>();
  get_d("epsilon", cfg.epsilon);
  if (j.contains("target")) {
    auto t = j.at("target").get<std::vector<double>>();
    if (t.size() != 2) throw ConfigError("config key 'target' must be [lo, hi]");
    cfg.target_lo = t[0];
    cfg.target_hi = t[1];
  }
  if (j.contains("second_target")) {
    auto t = j.at("second_target").get<std::vector<double>>();
    if (t.size() != 2) throw ConfigError("config key 'second_target' must be [lo, hi]");
    cfg.second_lo = t[0];
    cfg.second_hi = t[1];
  }
  get_i("side", cfg.side);
  get_ll("n_max", cfg.n_max);
  get_ll("intervals", cfg.intervals);
  get_d("x0", cfg.x0);
  get_d("center", cfg.center);
  get_d("radius", cfg.radius);
  get_ll("centers", cfg.centers);
  get_i("depth", cfg.depth);
  get_i("rung_cap", cfg.rung_cap);
  get_d("k_target", cfg.k_target);
  get_i("grid", cfg.grid);
  get_i("degree", cfg.degree);
  if (j.contains("arc")) {
    auto t = j.at("arc").get<std::vector<double>>();
    if (t.size() != 2) throw ConfigError("config key 'arc' must be [lo, hi]");
    cfg.arc_lo = t[0];
    cfg.arc_hi = t[1];
  }
  get_ll("kac_samples", cfg.kac_samples);
  get_ll("kac_n_max", cfg.kac_n_max);
  get_d("g_halfwidth", cfg.g_halfwidth);
  if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
  if (j.contains("statistical_criteria"))
    cfg.statistical_criteria = j.at("statistical_criteria").get<bool>();

  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.horizon < 1) throw ConfigError("field 'horizon' must be >= 1");
  if (cfg.samples < 0) throw ConfigError("field 'samples' must be >= 0");
  for (std::size_t i = 0; i + 1 < cfg.horizons.size(); ++i)
    if (!(cfg.horizons[i] < cfg.horizons[i + 1]))
      throw ConfigError("field 'horizons' must be strictly increasing");
  for (long long h : cfg.horizons)
    if (h < 1) throw ConfigError("field 'horizons' entries must be positive");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5))
    throw ConfigError("field 'epsilon' must lie in (0, 1/2)");
  if (!(cfg.target_lo < cfg.target_hi)) throw ConfigError("field 'target' must be ordered");
  if (!(cfg.radius > 0.0)) throw ConfigError("field 'radius' must be positive");
  if (cfg.grid < 10) throw ConfigError("field 'grid' must be >= 10");
  if (cfg.degree < 1) throw ConfigError("field 'degree' must be >= 1");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ConfigError("config parse error: " + std::string(err.what()));
  }
  return parse_config(j);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// dispatch and suite
// ---------------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  using Runner = void (*)(const ExperimentConfig&, ExperimentResult&);
  static const std::vector<std::pair<std::string, Runner>> runners{
      {"invariance", run_invariance},
      {"simulate", run_simulate},
      {"occupation", run_occupation},
      {"returns", run_returns},
      {"escapes", run_escapes},
      {"darling-kac", run_darling_kac},
      {"arcsine-occ", run_arcsine_occ},
      {"arcsine-last", run_arcsine_last},
      {"wandering", run_wandering},
      {"hopf", run_hopf},
      {"periodic", run_periodic},
      {"mapping", run_mapping},
      {"afn-check", run_afn_check},
      {"distortion", run_distortion},
      {"identities", run_identities},
      {"codes", run_codes},
      {"hairs", run_hairs},
      {"circle-model", run_circle_model},
  };

  Runner runner = nullptr;
  for (const auto& [name, fn] : runners)
    if (name == cfg.experiment) runner = fn;
  if (runner == nullptr) throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  ExperimentResult res;
  res.experiment = cfg.experiment;
  auto start = std::chrono::steady_clock::now();
  runner(cfg, res);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json j;
  j["experiment"] = cfg.experiment;
  j["library_version"] = kVersion;
  j["seed"] = cfg.seed;
  j["config"] = cfg.to_json();
  j["statistics"] = res.statistics;
  j["wall_seconds"] = res.wall_seconds;
  json criteria = json::array();
  for (const auto& c : res.criteria)
    criteria.push_back({{"name", c.name},
                        {"measured", c.measured},
                        {"threshold", c.threshold},
                        {"pass", c.pass}});
  j["criteria"] = criteria;
  j["artifacts"] = res.artifacts;

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir + "/" + cfg.experiment + ".json");
  out << j.dump(2) << "\n";
  return res;
}

std::vector<ExperimentConfig> suite_configs(const std::string& profile, std::uint64_t seed,
                                            const std::string& out_dir) {
  bool desk;
  if (profile == "desk")
    desk = true;
  else if (profile == "smoke")
    desk = false;
  else
    throw ConfigError("unknown suite profile '" + profile + "'");

  std::vector<ExperimentConfig> configs;
  auto base = [&](const std::string& name) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.seed = seed;
    cfg.out_dir = out_dir;
    cfg.statistical_criteria = desk;
    return cfg;
  };

  {
    auto cfg = base("invariance");
    cfg.intervals = desk ? 200 : 50;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("returns");
    cfg.samples = desk ? 1000000 : 10000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("escapes");
    cfg.n_max = desk ? 100000 : 1000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("occupation");
    cfg.samples = desk ? 2000 : 100;
    cfg.horizons = desk ? std::vector<long long>{10000, 100000, 1000000}
                        : std::vector<long long>{100, 1000, 10000};
    configs.push_back(cfg);
  }
  {
    auto cfg = base("darling-kac");
    cfg.horizon = desk ? 100000 : 1000;
    cfg.samples = desk ? 10000 : 200;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("arcsine-occ");
    cfg.horizon = desk ? 100000 : 1000;
    cfg.samples = desk ? 10000 : 200;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("arcsine-last");
    cfg.horizon = desk ? 100000 : 1000;
    cfg.samples = desk ? 10000 : 200;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("wandering");
    cfg.n_max = desk ? 10000 : 1000;
    cfg.samples = desk ? 200000 : 2000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("hopf");
    cfg.horizon = desk ? 1000000 : 10000;
    cfg.samples = desk ? 1000 : 100;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("periodic");
    cfg.centers = desk ? 50 : 5;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("mapping");
    cfg.grid = desk ? 1000 : 200;
    cfg.radius = 0.5;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("afn-check");
    cfg.grid = desk ? 10000 : 2000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("distortion");
    cfg.depth = desk ? 4 : 2;
    cfg.second_lo = 0.0;
    cfg.second_hi = 0.5;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("identities");
    cfg.grid = 1000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("codes");
    cfg.horizon = desk ? 100000 : 1000;
    cfg.samples = desk ? 10000 : 2000;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("hairs");
    cfg.horizon = desk ? 1000 : 200;
    cfg.samples = desk ? 200 : 10;
    configs.push_back(cfg);
  }
  {
    auto cfg = base("circle-model");
    cfg.degree = 2;
    cfg.horizon = desk ? 100000 : 1000;   // Birkhoff horizon
    cfg.samples = desk ? 1000 : 100;      // Birkhoff samples
    cfg.kac_samples = desk ? 1000000 : 10000;
    cfg.kac_n_max = 1000;
    configs.push_back(cfg);
  }
  return configs;
}

SuiteResult run_suite(const std::string& profile, std::uint64_t seed,
                      const std::string& out_dir) {
  SuiteResult suite;
  for (const auto& cfg : suite_configs(profile, seed, out_dir))
    suite.experiments.push_back(run_experiment(cfg));
  return suite;
}

}  // namespace booledyn::cli
