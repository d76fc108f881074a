#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vmv/harness/config.hpp"

namespace vmv::harness {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written after a successful simulate run. Every listed
/// file exists once the manifest is on disk; the manifest is written last.
struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  struct Entry {
    std::string name;
    std::uint64_t seed = 0;
    double target_ay_max = 0.0;
    double realized_ay_max = 0.0;
    bool target_reached = false;
    int iterations = 0;
  };
  std::vector<Entry> trajectories;
  std::vector<std::string> files;  // relative to the run directory
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Bundle directories of a run, in manifest order (or sorted scan when no
/// manifest is present).
std::vector<std::filesystem::path> list_bundles(const std::filesystem::path& dir);

// Subcommand bodies. Each returns a process exit code (0 on success) and
// throws DataError / NumericalFault for conditions the CLI maps to exit
// codes 2 and 3.

/// Generates the maneuver suite into <out>/trajectories and writes the
/// manifest. Unreachable lateral-acceleration targets are reported per
/// trajectory and do not abort the run.
int cmd_simulate(const ExperimentConfig& config);

/// Runs the one-step comparison for every configured model over all
/// bundles; writes the domain and per-trajectory reports.
int cmd_compare(const ExperimentConfig& config, const std::filesystem::path& data_dir);

/// Per-trajectory covariance selection plus observer runs; writes estimate
/// CSVs and the observer domain report. Filter faults mark the trajectory
/// failed and the run continues.
int cmd_observe(const ExperimentConfig& config, const std::filesystem::path& data_dir);

/// Merges validity and observer reports into consolidated long-format CSVs
/// and prints the percentage-increase summary to stdout.
int cmd_report(const std::filesystem::path& data_dir);

/// Exact-model consistency scenario: each candidate re-integrates its own
/// rollout (MAE < 1e-6) and the bicycle-Pacejka observer tracks its own
/// generative model (MAE < 1e-3). Returns 0 on pass, 3 on failure.
int cmd_self_check(const ExperimentConfig& config);

}  // namespace vmv::harness
