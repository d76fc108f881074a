#pragma once

#include <array>

#include "vmv/dynamics/states.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"

namespace vmv::dynamics {

struct WheelForces {
  std::array<TireForce, 4> wheel{};
  std::array<double, 4> slip_ratio{};
  std::array<double, 4> slip_angle{};
  Accel accel;
  bool wheel_lift = false;
};

/// Per-wheel slips, loads and tire forces of the planar four-wheel model
/// (roll and pitch forced to zero). Wheel speeds come from the input.
WheelForces four_wheel_forces(const FourWheelState& state, const ControlInput& input,
                              const TireParams& tire, const VehicleParams& params,
                              const Accel& load_accel = {});

struct FourWheelStep {
  FourWheelState state;
  Accel accel;
};

/// One explicit-Euler step of the candidate four-wheel model: planar
/// translational dynamics plus the four-force yaw balance. Roll, pitch and
/// vertical dynamics stay zero; wheel speeds pass through from the input.
FourWheelStep step_four_wheel(const FourWheelState& state, const ControlInput& input,
                              double dt, const TireParams& tire,
                              const VehicleParams& params, const Accel& load_accel = {});

}  // namespace vmv::dynamics
