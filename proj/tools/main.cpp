#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "booledyn/errors.hpp"
#include "booledyn/experiments.hpp"
#include "booledyn/version.hpp"

namespace {

using booledyn::cli::ExperimentConfig;

void add_map_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--map", cfg.map.kind, "map kind: boole | generalized_boole | cotangent");
  cmd->add_option("--poles", cfg.map.poles, "poles of a generalized Boole map");
  cmd->add_option("--weights", cfg.map.weights, "weights of a generalized Boole map");
}

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "run seed (all experiments are deterministic in it)");
  cmd->add_option("--out-dir", cfg.out_dir, "artifact directory");
}

int finish(const booledyn::cli::ExperimentResult& result) {
  for (const auto& c : result.criteria)
    std::printf("%-42s %-12s measured=%s  threshold=%s\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", booledyn::cli::format_double(c.measured).c_str(),
                c.threshold.c_str());
  std::printf("%s: %s (%.2fs)\n", result.experiment.c_str(),
              result.pass() ? "all criteria pass" : "CRITERIA FAILED", result.wall_seconds);
  return result.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"booledyn: boundary dynamics of Boole-type parabolic maps"};
  app.set_version_flag("--version", booledyn::kVersion);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;
  std::string profile = "smoke";

  auto add_experiment = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common_options(cmd, cfg);
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    return cmd;
  };

  CLI::App* simulate = add_experiment("simulate", "trace one orbit to CSV");
  add_map_options(simulate, cfg);
  simulate->add_option("--x0", cfg.x0, "initial point");
  simulate->add_option("--horizon,-n", cfg.horizon, "orbit length");
  simulate->add_option("--target", [&cfg](const std::vector<std::string>& vals) {
    cfg.target_lo = std::stod(vals[0]);
    cfg.target_hi = std::stod(vals[1]);
    return true;
  }, "target interval lo hi")->expected(2);

  CLI::App* invariance = add_experiment("invariance", "Lebesgue invariance of preimages");
  invariance->add_option("--intervals", cfg.intervals, "number of random intervals");

  CLI::App* occupation = add_experiment("occupation", "occupation growth S_n/n^(1/2-eps)");
  add_map_options(occupation, cfg);
  occupation->add_option("--samples,-M", cfg.samples, "sampled initial conditions");
  occupation->add_option("--horizons", cfg.horizons, "increasing horizons");
  occupation->add_option("--epsilon", cfg.epsilon, "exponent defect in (0,1/2)");

  CLI::App* returns = add_experiment("returns", "first-return-time tail");
  add_map_options(returns, cfg);
  returns->add_option("--samples,-M", cfg.samples, "conditioned samples");

  CLI::App* escapes = add_experiment("escapes", "exact escape-time tail");
  add_map_options(escapes, cfg);
  escapes->add_option("--n-max", cfg.n_max, "largest escape index");

  CLI::App* dk = add_experiment("darling-kac", "normalized occupation law");
  add_map_options(dk, cfg);
  dk->add_option("--horizon,-n", cfg.horizon, "orbit length");
  dk->add_option("--samples,-M", cfg.samples, "samples");

  CLI::App* aocc = add_experiment("arcsine-occ", "arcsine law for side occupation");
  add_map_options(aocc, cfg);
  aocc->add_option("--horizon,-n", cfg.horizon, "orbit length");
  aocc->add_option("--samples,-M", cfg.samples, "samples");
  aocc->add_option("--side", cfg.side, "+1 for (z+,inf), -1 for (-inf,z-)");

  CLI::App* alast = add_experiment("arcsine-last", "arcsine law for last visits");
  add_map_options(alast, cfg);
  alast->add_option("--horizon,-n", cfg.horizon, "orbit length");
  alast->add_option("--samples,-M", cfg.samples, "samples");

  CLI::App* wander = add_experiment("wandering", "wandering rate w_n(E)");
  add_map_options(wander, cfg);
  wander->add_option("--n-max", cfg.n_max, "largest n");
  wander->add_option("--samples,-M", cfg.samples, "uniform samples on E");

  CLI::App* hopf = add_experiment("hopf", "Hopf ratio of occupation counts");
  add_map_options(hopf, cfg);
  hopf->add_option("--horizon,-n", cfg.horizon, "orbit length");
  hopf->add_option("--samples,-M", cfg.samples, "samples");

  CLI::App* periodic = add_experiment("periodic", "periodic points with period bounds");
  add_map_options(periodic, cfg);
  periodic->add_option("--center", cfg.center, "search center");
  periodic->add_option("--radius", cfg.radius, "search radius");
  periodic->add_option("--centers", cfg.centers, "additional lambda-sampled centers");

  CLI::App* mapping = add_experiment("mapping", "mapping-property clauses");
  add_map_options(mapping, cfg);
  mapping->add_option("--grid", cfg.grid, "grid points");
  mapping->add_option("--radius", cfg.radius, "pole-neighbourhood radius r");

  CLI::App* afn = add_experiment("afn-check", "AFN certificate for the conjugated map");
  add_map_options(afn, cfg);
  afn->add_option("--K", cfg.k_target, "expansion target");
  afn->add_option("--grid", cfg.grid, "certificate grid size");

  CLI::App* distortion = add_experiment("distortion", "return-map cylinder distortion");
  add_map_options(distortion, cfg);
  distortion->add_option("--depth", cfg.depth, "cylinder depth (<= 6)");
  distortion->add_option("--rung-cap", cfg.rung_cap, "excursion rungs per return");

  CLI::App* expbaker = add_experiment("exp-baker", "z + e^-z Baker-domain checks");
  expbaker->add_option("mode", cfg.mode, "codes | hairs | identities")->required();
  expbaker->add_option("--horizon,-n", cfg.horizon, "code length");
  expbaker->add_option("--samples,-M", cfg.samples, "sampled codes");
  expbaker->add_option("--grid", cfg.grid, "identity grid");

  CLI::App* circle = add_experiment("circle-model", "finite-measure circle checks");
  circle->add_option("--degree,-d", cfg.degree, "angle multiplier d >= 2");
  circle->add_option("--horizon,-n", cfg.horizon, "Birkhoff horizon");
  circle->add_option("--samples,-M", cfg.samples, "Birkhoff samples");
  circle->add_option("--kac-samples", cfg.kac_samples, "return-time samples");

  CLI::App* suite = app.add_subcommand("suite", "run every experiment");
  suite->add_option("profile", profile, "smoke | desk")->required();
  suite->add_option("--seed", cfg.seed, "run seed");
  suite->add_option("--out-dir", cfg.out_dir, "artifact directory");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();

    if (name == "suite") {
      auto result = booledyn::cli::run_suite(profile, cfg.seed, cfg.out_dir);
      int failures = 0;
      for (const auto& exp : result.experiments) {
        for (const auto& c : exp.criteria) {
          if (!c.pass) ++failures;
          std::printf("%-14s %-42s %s\n", exp.experiment.c_str(), c.name.c_str(),
                      c.pass ? "PASS" : "FAIL");
        }
      }
      std::printf("suite %s: %d failing criteria\n", profile.c_str(), failures);
      return failures == 0 ? 0 : 1;
    }

    // A config file provides the base values; --seed and --out-dir flags
    // override it, all other flags are taken from the file when one is given.
    if (!config_path.empty()) {
      ExperimentConfig flag_cfg = cfg;
      cfg = booledyn::cli::load_config_file(config_path);
      if (sub->count("--seed")) cfg.seed = flag_cfg.seed;
      if (sub->count("--out-dir")) cfg.out_dir = flag_cfg.out_dir;
      if (cfg.experiment.empty()) cfg.experiment = name;
    } else {
      cfg.experiment = name;
    }

    if (name == "exp-baker") {
      if (cfg.mode == "codes")
        cfg.experiment = "codes";
      else if (cfg.mode == "hairs")
        cfg.experiment = "hairs";
      else if (cfg.mode == "identities")
        cfg.experiment = "identities";
      else
        throw booledyn::ConfigError("exp-baker mode must be codes, hairs or identities");
    }

    return finish(booledyn::cli::run_experiment(cfg));
  } catch (const booledyn::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}
