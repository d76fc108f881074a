#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmv/errors.hpp"
#include "vmv/harness/config.hpp"
#include "vmv/harness/run.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string models;
  double threshold = -1.0;
  long long seed = -1;
  long long jobs = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config");
  cmd->add_option("--out", opts.out_dir, "run directory (overrides config)");
  cmd->add_option("--seed", opts.seed, "global seed (overrides config)");
  cmd->add_option("--models", opts.models,
                  "comma separated model list (dbm-linear,dbm-dugoff,"
                  "dbm-pacejka,fwm-pacejka)");
  cmd->add_option("--threshold", opts.threshold,
                  "domain threshold in m/s^2 (default 0.5 g)");
  cmd->add_option("--jobs", opts.jobs, "worker threads (0 = all cores)");
}

vmv::harness::ExperimentConfig resolve_config(const CommonOptions& opts) {
  auto config = opts.config_path.empty()
                    ? vmv::harness::default_config()
                    : vmv::harness::load_config(opts.config_path);
  // Flags override the config file; the environment variable sits between.
  if (const char* env_out = std::getenv("VMV_OUT"); env_out && *env_out) {
    config.out_dir = env_out;
  }
  if (!opts.out_dir.empty()) {
    config.out_dir = opts.out_dir;
  }
  if (opts.seed >= 0) {
    config.seed = static_cast<std::uint64_t>(opts.seed);
    config.suite = vmv::harness::standard_suite(config.seed);
  }
  if (opts.threshold > 0.0) {
    config.threshold = opts.threshold;
  }
  if (opts.jobs >= 0) {
    config.jobs = static_cast<std::size_t>(opts.jobs);
  }
  if (!opts.models.empty()) {
    config.models.clear();
    std::string rest = opts.models;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string name = rest.substr(0, comma);
      rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
      if (name.empty()) {
        continue;
      }
      const auto id = vmv::validity::model_from_name(name);
      if (!id) {
        throw CLI::ValidationError("--models", "unknown model '" + name + "'");
      }
      config.models.push_back(*id);
    }
    if (config.models.empty()) {
      throw CLI::ValidationError("--models", "empty model list");
    }
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vehicle model validity toolkit"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* simulate = app.add_subcommand(
      "simulate", "generate the synthetic trajectory suite");
  auto* compare = app.add_subcommand(
      "compare", "one-step model comparison over a run directory");
  auto* observe = app.add_subcommand(
      "observe", "model-based EKF observers over a run directory");
  auto* report = app.add_subcommand(
      "report", "merge validity/observer reports and print the summary");
  auto* self_check = app.add_subcommand(
      "self-check", "exact-model consistency checks");
  for (auto* cmd : {simulate, compare, observe, report, self_check}) {
    add_common(cmd, opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const auto config = resolve_config(opts);
    const auto data_dir = config.out_dir;
    if (simulate->parsed()) {
      return vmv::harness::cmd_simulate(config);
    }
    if (compare->parsed()) {
      return vmv::harness::cmd_compare(config, data_dir);
    }
    if (observe->parsed()) {
      return vmv::harness::cmd_observe(config, data_dir);
    }
    if (report->parsed()) {
      return vmv::harness::cmd_report(data_dir);
    }
    if (self_check->parsed()) {
      return vmv::harness::cmd_self_check(config);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const vmv::NumericalFault& e) {
    std::cerr << "numerical fault: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const vmv::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
