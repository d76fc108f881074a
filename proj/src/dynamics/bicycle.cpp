#include "vmv/dynamics/bicycle.hpp"

#include <cmath>
#include <string>

#include "vmv/dynamics/slip.hpp"
#include "vmv/errors.hpp"

namespace vmv::dynamics {

namespace {

// Simulation envelope: finite entries, |vx| within 100 m/s.
bool plausible(const BicycleState& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.vx) &&
         std::isfinite(s.vy) && std::isfinite(s.yaw) &&
         std::isfinite(s.yaw_rate) && std::abs(s.vx) <= 100.0;
}

std::string describe(const BicycleState& s) {
  return "vx=" + std::to_string(s.vx) + " vy=" + std::to_string(s.vy) +
         " yaw_rate=" + std::to_string(s.yaw_rate);
}

}  // namespace

BicycleForces bicycle_forces(const BicycleState& state, const ControlInput& input,
                             const TireParams& tire, const VehicleParams& params,
                             const Accel& load_accel) {
  const auto angles =
      bicycle_slip_angles(state.vx, state.vy, state.yaw_rate, input.steer, params);

  // Longitudinal contact speeds in the wheel frame; the lumped front wheel
  // sees the steered projection of the axle-center velocity.
  const double vy_front = state.vy + params.dist_front * state.yaw_rate;
  const double vxp_front =
      state.vx * std::cos(input.steer) + vy_front * std::sin(input.steer);
  const double vxp_rear = state.vx;

  const auto loads = vertical_forces(load_accel.ax, load_accel.ay, params);

  BicycleForces out;
  out.front.slip_angle = angles.front;
  out.rear.slip_angle = angles.rear;
  out.front.slip_ratio =
      slip_ratio(input.front_axle_speed(), vxp_front, params.tire_radius);
  out.rear.slip_ratio =
      slip_ratio(input.rear_axle_speed(), vxp_rear, params.tire_radius);
  out.front.fz = loads.front_axle();
  out.rear.fz = loads.rear_axle();

  const auto front = tire_forces(out.front.slip_ratio, out.front.slip_angle,
                                 out.front.fz, tire);
  const auto rear =
      tire_forces(out.rear.slip_ratio, out.rear.slip_angle, out.rear.fz, tire);
  out.front.fxp = front.fx;
  out.front.fyp = front.fy;
  out.rear.fxp = rear.fx;
  out.rear.fyp = rear.fy;

  const auto front_body = tire_to_body(front.fx, front.fy, out.front.fz,
                                       input.steer, 0.0, 0.0);
  out.front.fx = front_body.fx;
  out.front.fy = front_body.fy;
  out.rear.fx = rear.fx;
  out.rear.fy = rear.fy;

  out.accel.ax = (out.front.fx + out.rear.fx) / params.total_mass;
  out.accel.ay = (out.front.fy + out.rear.fy) / params.total_mass;
  return out;
}

BicycleStep step_bicycle(const BicycleState& state, const ControlInput& input,
                         double dt, const TireParams& tire,
                         const VehicleParams& params, const Accel& load_accel) {
  const auto forces = bicycle_forces(state, input, tire, params, load_accel);

  const double dvx = state.yaw_rate * state.vy + forces.accel.ax;
  const double dvy = -state.yaw_rate * state.vx + forces.accel.ay;
  const double dyaw_rate =
      (forces.front.fy * params.dist_front - forces.rear.fy * params.dist_rear) /
      params.inertia_yaw;
  const double dx = state.vx * std::cos(state.yaw) - state.vy * std::sin(state.yaw);
  const double dy = state.vx * std::sin(state.yaw) + state.vy * std::cos(state.yaw);

  BicycleStep result;
  result.state = BicycleState{
      state.x + dt * dx,           state.y + dt * dy,
      state.vx + dt * dvx,         state.vy + dt * dvy,
      state.yaw + dt * state.yaw_rate, state.yaw_rate + dt * dyaw_rate,
  };
  result.accel = forces.accel;
  if (!plausible(result.state)) {
    throw IntegrationFault("bicycle step left the simulation envelope from " +
                           describe(state));
  }
  return result;
}

}  // namespace vmv::dynamics
