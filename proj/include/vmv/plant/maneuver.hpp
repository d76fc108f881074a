#pragma once

#include <cstdint>
#include <vector>

#include "vmv/plant/plant.hpp"
#include "vmv/plant/sensors.hpp"
#include "vmv/plant/trajectory.hpp"

namespace vmv::plant {

enum class ManeuverKind {
  kStepSteer,
  kSineSweep,
  kSlalom,
  kDoubleLaneChange,
  kStraightBrake,
};

const char* maneuver_kind_name(ManeuverKind kind);
ManeuverKind maneuver_kind_from_name(const std::string& name);

struct ManeuverSpec {
  ManeuverKind kind = ManeuverKind::kSlalom;
  double target_ay_max = 3.0;  // [m/s^2]
  double initial_speed = 18.0; // [m/s]
  double duration = 30.0;      // [s]
  std::uint64_t seed = 0;

  void validate() const;
};

struct ControlSample {
  double t = 0.0;
  PlantInput input;
};

struct ManeuverResult {
  Trajectory trajectory;                  // truth frames only, 100 Hz
  std::vector<ActuationFrame> actuation;  // plant wheel/steer signals, 100 Hz
  std::vector<ControlSample> controls;    // applied torque/steer series
  double realized_ay_max = 0.0;
  int iterations = 0;
  /// Realized max |ay| landed within +-10% of the target. False flags an
  /// unreachable target (friction limit); realized_ay_max reports what was
  /// achievable.
  bool target_reached = false;
};

/// Simulates the maneuver on the plant with closed-loop steering-amplitude
/// scaling (at most 8 re-simulations) until the realized max |ay| is within
/// +-10% of the target. Deterministic for a fixed spec.
ManeuverResult generate_maneuver(const ManeuverSpec& spec, const PlantConfig& config,
                                 const RoadProfile& road);

}  // namespace vmv::plant
