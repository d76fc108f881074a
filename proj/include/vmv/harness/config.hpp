#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vmv/dynamics/vehicle_params.hpp"
#include "vmv/plant/maneuver.hpp"
#include "vmv/plant/plant.hpp"
#include "vmv/plant/sensors.hpp"
#include "vmv/validity/model.hpp"

namespace vmv::harness {

/// Resolved experiment configuration. Defaults reproduce the standard
/// 28-trajectory suite.
struct ExperimentConfig {
  dynamics::VehicleParams vehicle;
  validity::TireSet tires;
  dynamics::PacejkaTire plant_tire;
  plant::SuspensionParams suspension;
  plant::RoadProfile road;
  plant::NoiseSigmas noise;
  std::vector<plant::ManeuverSpec> suite;
  std::vector<validity::ModelId> models{validity::kAllModels.begin(),
                                        validity::kAllModels.end()};
  double threshold = 4.905;  // 0.5 g [m/s^2]
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 20240811;
  std::size_t jobs = 0;  // 0 = hardware concurrency

  plant::PlantConfig plant_config() const {
    return plant::PlantConfig{vehicle, suspension, plant_tire};
  }

  /// Stable hash of the resolved configuration (manifest provenance).
  std::string config_hash() const;

  void validate() const;
};

/// The default 28-maneuver suite: targets log-spaced over [2, 10.1] m/s^2,
/// kinds and speeds cycled deterministically from the global seed.
std::vector<plant::ManeuverSpec> standard_suite(std::uint64_t seed);

/// Loads a JSON config file; absent keys keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config with every default (no file).
ExperimentConfig default_config();

/// Serializes the resolved config back to JSON (canonical key order).
std::string config_to_json(const ExperimentConfig& config);

}  // namespace vmv::harness
