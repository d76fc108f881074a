#include "vmv/validity/compare.hpp"

#include <cmath>
#include <string>

#include "vmv/errors.hpp"

namespace vmv::validity {

namespace {

constexpr double kTimeTol = 1e-9;

// Maps sensor timestamps onto truth indices; throws AlignmentError when a
// sensor instant has no matching truth frame.
class TruthGrid {
 public:
  explicit TruthGrid(const plant::Trajectory& traj) : traj_(traj) {
    if (traj.truth.size() < 2) {
      throw AlignmentError("trajectory '" + traj.name +
                           "' has fewer than 2 truth frames");
    }
    t0_ = traj.truth.front().t;
    dt_ = traj.truth[1].t - traj.truth[0].t;
    if (dt_ <= 0.0) {
      throw AlignmentError("trajectory '" + traj.name +
                           "' truth timestamps not increasing");
    }
  }

  const plant::GroundTruthFrame& at(double t) const {
    const auto idx = static_cast<std::ptrdiff_t>(std::llround((t - t0_) / dt_));
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(traj_.truth.size())) {
      throw AlignmentError("sensor time " + std::to_string(t) +
                           " outside the truth stream of '" + traj_.name + "'");
    }
    const auto& frame = traj_.truth[static_cast<std::size_t>(idx)];
    if (std::abs(frame.t - t) > kTimeTol) {
      throw AlignmentError("sensor time " + std::to_string(t) +
                           " does not coincide with a truth frame of '" +
                           traj_.name + "'");
    }
    return frame;
  }

 private:
  const plant::Trajectory& traj_;
  double t0_ = 0.0;
  double dt_ = 0.0;
};

dynamics::ControlInput input_from_sensor(const plant::SensorFrame& s) {
  dynamics::ControlInput u;
  u.steer = s.steer;
  u.wheel_speed = s.wheel_speed;
  return u;
}

template <typename Record, typename Make>
std::vector<Record> walk(const plant::Trajectory& traj, ModelId id,
                         const dynamics::TireParams& tire,
                         const dynamics::VehicleParams& params, Make make) {
  const TruthGrid grid(traj);
  const auto& sensors = traj.sensors;
  if (sensors.size() < 2) {
    throw AlignmentError("trajectory '" + traj.name +
                         "' has fewer than 2 sensor frames");
  }
  const double dt = sensors[1].t - sensors[0].t;
  if (dt <= 0.0) {
    throw AlignmentError("trajectory '" + traj.name +
                         "' sensor timestamps not increasing");
  }

  std::vector<Record> records;
  records.reserve(sensors.size() - 1);
  for (std::size_t k = 0; k + 1 < sensors.size(); ++k) {
    const double step_dt = sensors[k + 1].t - sensors[k].t;
    if (std::abs(step_dt - dt) > kTimeTol) {
      throw AlignmentError("trajectory '" + traj.name +
                           "' sensor grid is not uniform");
    }
    const auto& truth_k = grid.at(sensors[k].t);
    const auto& truth_k1 = grid.at(sensors[k + 1].t);

    // Seed from ground truth, step once with the (noisy) sensor inputs.
    const StateVec3 seed{truth_k.vx, truth_k.vy, truth_k.yaw_rate};
    const dynamics::Accel load{truth_k.ax, truth_k.ay};
    const auto input = input_from_sensor(sensors[k + 1]);
    const auto step = model_step(id, seed, input, step_dt, tire, params, load);

    records.push_back(make(truth_k1, step.state));
  }
  return records;
}

}  // namespace

std::vector<StepError> compare_trajectory(const plant::Trajectory& traj, ModelId id,
                                          const dynamics::TireParams& tire,
                                          const dynamics::VehicleParams& params) {
  return walk<StepError>(
      traj, id, tire, params,
      [](const plant::GroundTruthFrame& truth, const StateVec3& predicted) {
        return StepError{truth.t, std::abs(predicted.vx - truth.vx),
                         std::abs(predicted.vy - truth.vy),
                         std::abs(predicted.yaw_rate - truth.yaw_rate), truth.ay};
      });
}

std::vector<ResidualRecord> one_step_residuals(const plant::Trajectory& traj,
                                               ModelId id,
                                               const dynamics::TireParams& tire,
                                               const dynamics::VehicleParams& params) {
  return walk<ResidualRecord>(
      traj, id, tire, params,
      [](const plant::GroundTruthFrame& truth, const StateVec3& predicted) {
        return ResidualRecord{truth.t, predicted.vx - truth.vx,
                              predicted.vy - truth.vy,
                              predicted.yaw_rate - truth.yaw_rate};
      });
}

const plant::GroundTruthFrame& truth_at(const plant::Trajectory& traj, double t) {
  return TruthGrid(traj).at(t);
}

}  // namespace vmv::validity
