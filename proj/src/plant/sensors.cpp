#include "vmv/plant/sensors.hpp"

#include <random>
#include <stdexcept>

#include "vmv/errors.hpp"

namespace vmv::plant {

void NoiseSigmas::validate() const {
  if (accel < 0.0 || yaw_rate < 0.0 || wheel_speed < 0.0 || steer < 0.0) {
    throw std::invalid_argument("noise sigmas must be >= 0");
  }
}

std::vector<SensorFrame> sample_sensors(const std::vector<GroundTruthFrame>& truth,
                                        const std::vector<ActuationFrame>& actuation,
                                        const NoiseSigmas& noise,
                                        std::uint64_t seed) {
  noise.validate();
  if (actuation.size() != truth.size()) {
    throw AlignmentError("sample_sensors: actuation and truth streams differ in length");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](double sigma) { return sigma > 0.0 ? sigma * gauss(rng) : 0.0; };

  const std::size_t count = truth.size() / 2;
  std::vector<SensorFrame> sensors;
  sensors.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& gt = truth[2 * k];
    const auto& act = actuation[2 * k];
    SensorFrame f;
    f.t = gt.t;
    f.ax = gt.ax + draw(noise.accel);
    f.ay = gt.ay + draw(noise.accel);
    f.yaw_rate = gt.yaw_rate + draw(noise.yaw_rate);
    for (int i = 0; i < 4; ++i) {
      f.wheel_speed[i] = act.wheel_speed[i] + draw(noise.wheel_speed);
    }
    f.steer = act.steer + draw(noise.steer);
    sensors.push_back(f);
  }
  return sensors;
}

}  // namespace vmv::plant
