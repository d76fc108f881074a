#pragma once

#include "vmv/dynamics/states.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"

namespace vmv::dynamics {

struct AxleForces {
  double slip_ratio = 0.0;
  double slip_angle = 0.0;
  double fxp = 0.0;
  double fyp = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
};

struct BicycleForces {
  AxleForces front;
  AxleForces rear;
  /// Force-sum accelerations (sum Fx / M, sum Fy / M); these equal the
  /// accelerometer measurement model of the state observer.
  Accel accel;
};

/// Evaluates per-axle slips and tire forces at the given state. Wheel
/// speeds of an axle are averaged into the lumped wheel. `load_accel`
/// feeds the quasi-static load transfer (previous-step accelerations,
/// zero at the start of a rollout).
BicycleForces bicycle_forces(const BicycleState& state, const ControlInput& input,
                             const TireParams& tire, const VehicleParams& params,
                             const Accel& load_accel = {});

struct BicycleStep {
  BicycleState state;
  Accel accel;
};

/// One explicit-Euler step of the dynamic bicycle model. Throws
/// IntegrationFault when the result is non-finite.
BicycleStep step_bicycle(const BicycleState& state, const ControlInput& input,
                         double dt, const TireParams& tire,
                         const VehicleParams& params, const Accel& load_accel = {});

}  // namespace vmv::dynamics
