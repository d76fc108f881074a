#pragma once

#include <array>

#include "vmv/dynamics/states.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"

namespace vmv::plant {

/// Linear spring-damper per corner.
struct SuspensionParams {
  double spring_rate = 30000.0;  // k_s [N/m]
  double damping = 3500.0;       // c_s [N s/m]
};

/// Piecewise-constant road description.
struct RoadProfile {
  double slope = 0.0;      // Theta_s [rad], positive uphill
  double bank = 0.0;       // Theta_b [rad]
  double friction = 1.1;   // mu [-]
  double wind_speed = 0.0; // headwind [m/s]

  void validate() const;
};

struct PlantInput {
  double steer = 0.0;
  std::array<double, 4> torque{};  // {fl, fr, rl, rr} [N m]
};

/// Full plant state: planar four-wheel body plus heave rate and per-corner
/// suspension displacement (upward, from static equilibrium).
struct PlantState {
  dynamics::FourWheelState body;
  double vz = 0.0;
  std::array<double, 4> susp{};
};

struct PlantConfig {
  dynamics::VehicleParams vehicle;
  SuspensionParams suspension;
  dynamics::PacejkaTire tire;
  double dt_fine = 1e-3;  // RK4 step [s]
};

/// Snapshot of derived quantities at a state, shared by the integrator and
/// the trajectory logger.
struct PlantOutputs {
  dynamics::Accel accel;         // body-frame ax, ay
  std::array<double, 4> fz{};    // tire normal loads
  std::array<double, 4> fxp{};   // tire-frame longitudinal forces
  bool wheel_lift = false;
};

/// Instantaneous accelerations and loads at (state, input).
PlantOutputs plant_outputs(const PlantState& state, const PlantInput& input,
                           const RoadProfile& road, const PlantConfig& config);

/// Advances the plant by dt (one RK4 step at the caller's dt; callers
/// normally loop at config.dt_fine). Throws SimulationAbort when the state
/// leaves the envelope (|roll|, |pitch| > 0.3 rad or non-finite entries).
PlantState plant_step(const PlantState& state, const PlantInput& input,
                      const RoadProfile& road, const PlantConfig& config, double dt);

/// A plant at rest on a flat road with settled suspension.
PlantState plant_rest_state(const PlantConfig& config, double speed = 0.0);

}  // namespace vmv::plant
