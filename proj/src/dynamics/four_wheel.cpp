#include "vmv/dynamics/four_wheel.hpp"

#include <cmath>
#include <string>

#include "vmv/dynamics/slip.hpp"
#include "vmv/errors.hpp"

namespace vmv::dynamics {

namespace {

bool plausible(const FourWheelState& s) {
  return std::isfinite(s.x) && std::isfinite(s.vx) && std::isfinite(s.y) &&
         std::isfinite(s.vy) && std::isfinite(s.yaw) &&
         std::isfinite(s.yaw_rate) && std::abs(s.vx) <= 100.0;
}

}  // namespace

WheelForces four_wheel_forces(const FourWheelState& state, const ControlInput& input,
                              const TireParams& tire, const VehicleParams& params,
                              const Accel& load_accel) {
  const auto alphas =
      wheel_slip_angles(state.vx, state.vy, state.yaw_rate, input.steer, params);
  const auto loads = vertical_forces(load_accel.ax, load_accel.ay, params);

  WheelForces out;
  out.wheel_lift = loads.wheel_lift;
  out.slip_angle = alphas;

  double sum_fx = 0.0;
  double sum_fy = 0.0;
  for (int i = 0; i < 4; ++i) {
    const bool front = i == kFl || i == kFr;
    const bool left = i == kFl || i == kRl;
    const double steer = front ? input.steer : 0.0;

    // Planar contact-point velocity, rotated into the wheel frame.
    const double vwx = left ? state.vx - params.half_track_left * state.yaw_rate
                            : state.vx + params.half_track_right * state.yaw_rate;
    const double vwy = front ? state.vy + params.dist_front * state.yaw_rate
                             : state.vy - params.dist_rear * state.yaw_rate;
    const double vxp = vwx * std::cos(steer) + vwy * std::sin(steer);

    out.slip_ratio[i] = slip_ratio(input.wheel_speed[i], vxp, params.tire_radius);

    const auto tf = tire_forces(out.slip_ratio[i], alphas[i], loads.fz[i], tire);
    const auto body = tire_to_body(tf.fx, tf.fy, loads.fz[i], steer, 0.0, 0.0);
    out.wheel[i] = TireForce{tf.fx, tf.fy, body.fx, body.fy, loads.fz[i]};
    sum_fx += body.fx;
    sum_fy += body.fy;
  }

  out.accel.ax = sum_fx / params.total_mass;
  out.accel.ay = sum_fy / params.total_mass;
  return out;
}

FourWheelStep step_four_wheel(const FourWheelState& state, const ControlInput& input,
                              double dt, const TireParams& tire,
                              const VehicleParams& params, const Accel& load_accel) {
  const auto forces = four_wheel_forces(state, input, tire, params, load_accel);

  const double dvx = state.yaw_rate * state.vy + forces.accel.ax;
  const double dvy = -state.yaw_rate * state.vx + forces.accel.ay;
  // Full four-force yaw balance, including the longitudinal track terms.
  const double yaw_moment =
      (forces.wheel[kFl].fy + forces.wheel[kFr].fy) * params.dist_front -
      (forces.wheel[kRl].fy + forces.wheel[kRr].fy) * params.dist_rear +
      (forces.wheel[kFr].fx + forces.wheel[kRr].fx) * params.half_track_right -
      (forces.wheel[kFl].fx + forces.wheel[kRl].fx) * params.half_track_left;
  const double dx = state.vx * std::cos(state.yaw) - state.vy * std::sin(state.yaw);
  const double dy = state.vx * std::sin(state.yaw) + state.vy * std::cos(state.yaw);

  FourWheelStep result;
  result.state = FourWheelState{
      state.x + dt * dx,
      state.vx + dt * dvx,
      state.y + dt * dy,
      state.vy + dt * dvy,
      state.yaw + dt * state.yaw_rate,
      state.yaw_rate + dt * yaw_moment / params.inertia_yaw,
      0.0,
      0.0,
      0.0,
      0.0,
      input.wheel_speed,
  };
  result.accel = forces.accel;
  if (!plausible(result.state)) {
    throw IntegrationFault("four-wheel step left the simulation envelope at vx=" +
                           std::to_string(state.vx));
  }
  return result;
}

}  // namespace vmv::dynamics
