#pragma once

#include <array>

#include "vmv/dynamics/vehicle_params.hpp"

namespace vmv::dynamics {

/// Below this speed slip computations are regularized: denominators are
/// floored at kLowSpeedEps and the slip ratio has a dead zone so a vehicle
/// at rest produces exactly zero slip.
inline constexpr double kLowSpeedEps = 0.5;  // [m/s]

/// Longitudinal slip ratio of one wheel.
///
/// Driving branch (r_eff*omega >= v): (r_eff*omega - v) / |r_eff*omega|,
/// braking branch otherwise with |v| in the denominator. The result is
/// clamped to [-1, 1]; when both |r_eff*omega| and |v| are below
/// kLowSpeedEps the ratio is defined as 0.
double slip_ratio(double wheel_omega, double v_wheel_long, double tire_radius);

/// Slip angle of a front wheel: steer - atan((vy + l_f*yaw_rate) / vx_eff),
/// with vx_eff the longitudinal contact speed already including the track
/// term. The denominator is kept away from zero (sign-preserving floor at
/// kLowSpeedEps).
double slip_angle_front(double steer, double vx_eff, double vy, double yaw_rate,
                        double dist_front);

/// Slip angle of a rear wheel: -atan((vy - l_r*yaw_rate) / vx_eff).
double slip_angle_rear(double vx_eff, double vy, double yaw_rate, double dist_rear);

struct AxleSlipAngles {
  double front = 0.0;
  double rear = 0.0;
};

/// Lumped bicycle slip angles (zero track term).
AxleSlipAngles bicycle_slip_angles(double vx, double vy, double yaw_rate,
                                   double steer, const VehicleParams& params);

/// Per-wheel slip angles, order {fl, fr, rl, rr}. Left wheels use
/// vx - t_l*yaw_rate, right wheels vx + t_r*yaw_rate as the contact speed.
std::array<double, 4> wheel_slip_angles(double vx, double vy, double yaw_rate,
                                        double steer, const VehicleParams& params);

}  // namespace vmv::dynamics
