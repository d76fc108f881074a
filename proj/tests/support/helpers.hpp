#pragma once

#include <cmath>
#include <vector>

#include "vmv/dynamics/states.hpp"

namespace vmv::testing {

/// Slalom-flavoured synthetic 50 Hz input series for model rollouts.
inline std::vector<dynamics::ControlInput> synthetic_inputs(std::size_t n,
                                                            double speed,
                                                            double radius) {
  std::vector<dynamics::ControlInput> inputs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k * 0.02;
    auto& u = inputs[k];
    u.steer = 0.05 * std::sin(2.0 * M_PI * 0.3 * t);
    const double omega = speed / radius * (1.0 + 0.02 * std::sin(0.7 * t));
    u.wheel_speed = {omega, omega, omega, omega};
  }
  return inputs;
}

}  // namespace vmv::testing
