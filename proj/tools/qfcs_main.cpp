#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "qfcs/experiments.hpp"
#include "qfcs/version.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string mode;
  std::int64_t shots = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common_options(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "Config file (defaults when omitted)");
  cmd->add_option("--out", options.out_path, "Output path ('-' for stdout)");
  cmd->add_option("--mode", options.mode, "Estimation mode: exact|shots")
      ->check(CLI::IsMember({"exact", "shots"}));
  cmd->add_option("--shots", options.shots, "Shots per estimated value");
  cmd->add_option("--seed", options.seed, "Base seed")->each([&](const std::string&) {
    options.seed_set = true;
  });
}

qfcs::ExperimentConfig resolve_config(const CommonOptions& options) {
  qfcs::ExperimentConfig config = options.config_path.empty()
                                      ? qfcs::parse_config("")
                                      : qfcs::load_config_file(options.config_path);
  if (!options.mode.empty()) {
    config.mode = options.mode == "shots" ? qfcs::EstimationMode::shots
                                          : qfcs::EstimationMode::exact;
  }
  if (options.shots >= 0) {
    if (options.shots < 1) throw qfcs::ConfigError("shots must be >= 1");
    config.shots = options.shots;
  }
  if (options.seed_set) config.seed = options.seed;
  if (!options.out_path.empty()) config.output_path = options.out_path;
  return config;
}

int run(const CommonOptions& options,
        void (*experiment)(const qfcs::ExperimentConfig&, std::ostream&)) {
  const qfcs::ExperimentConfig config = resolve_config(options);
  if (config.output_path == "-") {
    experiment(config, std::cout);
    return 0;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    throw qfcs::ConfigError("cannot open output file '" + config.output_path + "'");
  }
  experiment(config, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-counting statistics of particle distributions on a simulated "
               "quantum register"};
  app.set_version_flag("--version", std::string("qfcs ") + qfcs::kVersion);
  app.require_subcommand(1);

  CommonOptions options;
  void (*experiment)(const qfcs::ExperimentConfig&, std::ostream&) = nullptr;

  auto* distribution = app.add_subcommand(
      "distribution", "Reconstruct the particle distribution over a grid-size sweep");
  add_common_options(distribution, options);
  distribution->callback([&] { experiment = qfcs::run_distribution_experiment; });

  auto* filter = app.add_subcommand(
      "filter", "Filter sectors out, reconstruct the remaining distribution");
  add_common_options(filter, options);
  filter->callback([&] { experiment = qfcs::run_filter_experiment; });

  auto* cumulants = app.add_subcommand(
      "cumulants", "Finite-difference cumulants over an h sweep with Richardson rounds");
  add_common_options(cumulants, options);
  cumulants->callback([&] { experiment = qfcs::run_cumulant_experiment; });

  auto* charfunc = app.add_subcommand("charfunc", "Raw characteristic-function dump");
  add_common_options(charfunc, options);
  charfunc->callback([&] { experiment = qfcs::run_charfunc_experiment; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return run(options, experiment);
  } catch (const qfcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
