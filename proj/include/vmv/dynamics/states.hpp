#pragma once

#include <array>

namespace vmv::dynamics {

inline constexpr int kFl = 0;
inline constexpr int kFr = 1;
inline constexpr int kRl = 2;
inline constexpr int kRr = 3;

/// Body-frame accelerations (ax = dVx/dt - yaw_rate*Vy,
/// ay = dVy/dt + yaw_rate*Vx). Used both as the measurement quantity and
/// as the load-transfer input of the next step.
struct Accel {
  double ax = 0.0;
  double ay = 0.0;
};

/// Steering angle plus measured wheel speeds; the control inputs of every
/// candidate model.
struct ControlInput {
  double steer = 0.0;                   // delta [rad]
  std::array<double, 4> wheel_speed{};  // {fl, fr, rl, rr} [rad/s]

  double front_axle_speed() const { return 0.5 * (wheel_speed[kFl] + wheel_speed[kFr]); }
  double rear_axle_speed() const { return 0.5 * (wheel_speed[kRl] + wheel_speed[kRr]); }
};

/// Planar dynamic bicycle state.
struct BicycleState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double yaw = 0.0;
  double yaw_rate = 0.0;
};

/// Four-wheel model state. The candidate model propagates only the planar
/// entries; roll/pitch stay zero and wheel speeds pass through from the
/// input. The plant extends this with heave and suspension states.
struct FourWheelState {
  double x = 0.0;
  double vx = 0.0;
  double y = 0.0;
  double vy = 0.0;
  double yaw = 0.0;
  double yaw_rate = 0.0;
  double roll = 0.0;
  double roll_rate = 0.0;
  double pitch = 0.0;
  double pitch_rate = 0.0;
  std::array<double, 4> wheel_speed{};
};

}  // namespace vmv::dynamics
