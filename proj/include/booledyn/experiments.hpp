#ifndef BOOLEDYN_EXPERIMENTS_HPP
#define BOOLEDYN_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "booledyn/interval.hpp"
#include "booledyn/maps.hpp"

namespace booledyn::cli {

struct MapSpec {
  std::string kind = "boole";  // boole | generalized_boole | cotangent
  std::vector<double> poles;
  std::vector<double> weights;

  GeneralizedBoole build_generalized() const;
  nlohmann::json to_json() const;
};

struct ExperimentConfig {
  std::string experiment;
  MapSpec map;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  long long horizon = 100000;
  long long samples = 10000;
  std::vector<long long> horizons{10000, 100000, 1000000};
  double epsilon = 1.0 / 6.0;
  double target_lo = -1.0, target_hi = 1.0;
  double second_lo = 0.0, second_hi = 1.0;  // F for hopf, E for distortion
  int side = +1;
  long long n_max = 10000;
  long long intervals = 200;  // invariance
  double x0 = 2.0;            // simulate
  double center = 0.7071;     // periodic
  double radius = 0.05;
  long long centers = 50;
  int depth = 4;  // distortion
  int rung_cap = 14;
  double k_target = 1.5;  // afn
  int grid = 1000;
  int degree = 2;  // circle-model d / exp-baker family degree
  double arc_lo = 0.0, arc_hi = 0.5;
  long long kac_samples = 1000000;
  long long kac_n_max = 1000;
  double g_halfwidth = 0.1;
  std::string mode = "codes";  // exp-baker submode
  bool statistical_criteria = true;

  nlohmann::json to_json() const;
};

// Parses a flat JSON config; unknown keys are errors naming the field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
void validate(const ExperimentConfig& config);

struct CriterionResult {
  std::string name;
  double measured = 0;
  std::string threshold;
  bool pass = false;
};

struct ExperimentResult {
  std::string experiment;
  nlohmann::json statistics;
  std::vector<CriterionResult> criteria;
  std::vector<std::string> artifacts;
  double wall_seconds = 0;

  bool pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

// Runs one experiment, writing <experiment>.csv and <experiment>.json under
// config.out_dir. Exit contract: status 0 iff all criteria pass.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SuiteResult {
  std::vector<ExperimentResult> experiments;
  bool pass() const {
    for (const auto& e : experiments)
      if (!e.pass()) return false;
    return true;
  }
};

// Profile "desk" runs the acceptance scales; "smoke" runs every experiment at
// roughly 1% scale and keeps only the structural (exact) criteria.
SuiteResult run_suite(const std::string& profile, std::uint64_t seed,
                      const std::string& out_dir);

// The desk-profile experiment configurations, exposed for the acceptance
// driver.
std::vector<ExperimentConfig> suite_configs(const std::string& profile, std::uint64_t seed,
                                            const std::string& out_dir);

std::string format_double(double v);

}  // namespace booledyn::cli

#endif
