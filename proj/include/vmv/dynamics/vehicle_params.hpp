#pragma once

#include <string_view>

namespace vmv::dynamics {

/// Geometric and inertial constants of the vehicle. Defaults describe the
/// mid-size sedan preset used throughout the standard experiment suite.
struct VehicleParams {
  double total_mass = 1578.0;      // M_T [kg]
  double suspended_mass = 1420.0;  // M_S [kg]
  double inertia_roll = 550.0;     // I_x [kg m^2]
  double inertia_pitch = 2700.0;   // I_y [kg m^2]
  double inertia_yaw = 2924.0;     // I_z [kg m^2]
  double dist_front = 1.134;       // l_f, cog to front axle [m]
  double dist_rear = 1.578;        // l_r, cog to rear axle [m]
  double half_track_left = 0.7565;   // t_l [m]
  double half_track_right = 0.7565;  // t_r [m]
  double cog_height = 0.55;        // h_cog [m]
  double aero_height = 0.62;       // h_aero [m]
  double tire_radius = 0.316;      // r_eff [m]
  double wheel_inertia = 1.22;     // I_r [kg m^2]
  double air_density = 1.225;      // rho [kg/m^3]
  double drag_coeff = 0.29;        // C_d [-]
  double frontal_area = 2.3;       // A_F [m^2]
  double gravity = 9.81;           // g [m/s^2]

  double wheelbase() const { return dist_front + dist_rear; }
  double track() const { return half_track_left + half_track_right; }
  double weight() const { return total_mass * gravity; }

  /// Throws std::invalid_argument when masses, lengths, inertias or the
  /// radius are not strictly positive, or the axle/track sums vanish.
  void validate() const;
};

/// Named preset lookup ("mid_sedan"). Throws std::invalid_argument on an
/// unknown name.
VehicleParams vehicle_preset(std::string_view name);

}  // namespace vmv::dynamics
