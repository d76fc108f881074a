#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vmv/plant/trajectory.hpp"

namespace vmv::plant {

/// Per-channel noise standard deviations.
struct NoiseSigmas {
  double accel = 0.05;        // ax, ay [m/s^2]
  double yaw_rate = 0.002;    // [rad/s]
  double wheel_speed = 0.05;  // [rad/s]
  double steer = 0.001;       // [rad]

  void validate() const;
};

/// Wheel speeds and steering angle sampled on the truth grid; the signals
/// the sensor stream decimates.
struct ActuationFrame {
  double t = 0.0;
  std::array<double, 4> wheel_speed{};
  double steer = 0.0;
};

/// Decimates the truth stream by 2 (zero-order hold on the shared grid,
/// floor(N/2) output frames) and adds zero-mean Gaussian noise per channel.
/// Deterministic for a fixed seed.
std::vector<SensorFrame> sample_sensors(const std::vector<GroundTruthFrame>& truth,
                                        const std::vector<ActuationFrame>& actuation,
                                        const NoiseSigmas& noise, std::uint64_t seed);

}  // namespace vmv::plant
