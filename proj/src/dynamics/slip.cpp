#include "vmv/dynamics/slip.hpp"

#include <algorithm>
#include <cmath>

namespace vmv::dynamics {

namespace {

// Sign-preserving denominator floor at kLowSpeedEps.
double guarded(double v) {
  if (v >= 0.0) {
    return std::max(v, kLowSpeedEps);
  }
  return std::min(v, -kLowSpeedEps);
}

}  // namespace

double slip_ratio(double wheel_omega, double v_wheel_long, double tire_radius) {
  const double ws = tire_radius * wheel_omega;
  if (std::abs(ws) < kLowSpeedEps && std::abs(v_wheel_long) < kLowSpeedEps) {
    return 0.0;
  }
  const double denom =
      (ws >= v_wheel_long) ? std::max(std::abs(ws), kLowSpeedEps)
                           : std::max(std::abs(v_wheel_long), kLowSpeedEps);
  return std::clamp((ws - v_wheel_long) / denom, -1.0, 1.0);
}

double slip_angle_front(double steer, double vx_eff, double vy, double yaw_rate,
                        double dist_front) {
  return steer - std::atan((vy + dist_front * yaw_rate) / guarded(vx_eff));
}

double slip_angle_rear(double vx_eff, double vy, double yaw_rate, double dist_rear) {
  return -std::atan((vy - dist_rear * yaw_rate) / guarded(vx_eff));
}

AxleSlipAngles bicycle_slip_angles(double vx, double vy, double yaw_rate,
                                   double steer, const VehicleParams& params) {
  return {slip_angle_front(steer, vx, vy, yaw_rate, params.dist_front),
          slip_angle_rear(vx, vy, yaw_rate, params.dist_rear)};
}

std::array<double, 4> wheel_slip_angles(double vx, double vy, double yaw_rate,
                                        double steer, const VehicleParams& params) {
  const double vx_left = vx - params.half_track_left * yaw_rate;
  const double vx_right = vx + params.half_track_right * yaw_rate;
  return {
      slip_angle_front(steer, vx_left, vy, yaw_rate, params.dist_front),
      slip_angle_front(steer, vx_right, vy, yaw_rate, params.dist_front),
      slip_angle_rear(vx_left, vy, yaw_rate, params.dist_rear),
      slip_angle_rear(vx_right, vy, yaw_rate, params.dist_rear),
  };
}

}  // namespace vmv::dynamics
