#include "vmv/validity/model.hpp"

#include <cmath>
#include <stdexcept>

#include "vmv/dynamics/bicycle.hpp"
#include "vmv/dynamics/four_wheel.hpp"

namespace vmv::validity {

using dynamics::Accel;
using dynamics::BicycleState;
using dynamics::ControlInput;
using dynamics::FourWheelState;
using dynamics::TireParams;
using dynamics::VehicleParams;

const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::kDbmLinear: return "dbm-linear";
    case ModelId::kDbmDugoff: return "dbm-dugoff";
    case ModelId::kDbmPacejka: return "dbm-pacejka";
    case ModelId::kFwmPacejka: return "fwm-pacejka";
  }
  return "unknown";
}

std::optional<ModelId> model_from_name(std::string_view name) {
  for (auto id : kAllModels) {
    if (name == model_name(id)) {
      return id;
    }
  }
  return std::nullopt;
}

dynamics::TireParams tire_for_model(ModelId id, const TireSet& tires) {
  switch (id) {
    case ModelId::kDbmLinear: return tires.linear;
    case ModelId::kDbmDugoff: return tires.dugoff;
    case ModelId::kDbmPacejka: return tires.pacejka;
    case ModelId::kFwmPacejka: return tires.pacejka;
  }
  throw std::invalid_argument("bad model id");
}

namespace {

bool is_four_wheel(ModelId id) { return id == ModelId::kFwmPacejka; }

BicycleState embed_bicycle(const StateVec3& z) {
  BicycleState s;
  s.vx = z.vx;
  s.vy = z.vy;
  s.yaw_rate = z.yaw_rate;
  return s;
}

FourWheelState embed_four_wheel(const StateVec3& z, const ControlInput& input) {
  FourWheelState s;
  s.vx = z.vx;
  s.vy = z.vy;
  s.yaw_rate = z.yaw_rate;
  s.wheel_speed = input.wheel_speed;
  return s;
}

}  // namespace

ModelStep model_step(ModelId id, const StateVec3& state, const ControlInput& input,
                     double dt, const TireParams& tire, const VehicleParams& params,
                     const Accel& load_accel) {
  if (dt <= 0.0) {
    throw std::invalid_argument("model_step: dt must be > 0");
  }
  if (is_four_wheel(id)) {
    const auto step = dynamics::step_four_wheel(embed_four_wheel(state, input),
                                                input, dt, tire, params, load_accel);
    return {{step.state.vx, step.state.vy, step.state.yaw_rate}, step.accel};
  }
  const auto step = dynamics::step_bicycle(embed_bicycle(state), input, dt, tire,
                                           params, load_accel);
  return {{step.state.vx, step.state.vy, step.state.yaw_rate}, step.accel};
}

std::array<double, 3> model_measurement(ModelId id, const StateVec3& state,
                                        const ControlInput& input,
                                        const TireParams& tire,
                                        const VehicleParams& params,
                                        const Accel& load_accel) {
  Accel accel;
  if (is_four_wheel(id)) {
    accel = dynamics::four_wheel_forces(embed_four_wheel(state, input), input,
                                        tire, params, load_accel)
                .accel;
  } else {
    accel = dynamics::bicycle_forces(embed_bicycle(state), input, tire, params,
                                     load_accel)
                .accel;
  }
  return {accel.ax, accel.ay, state.yaw_rate};
}

plant::Trajectory rollout_model(ModelId id, const TireParams& tire,
                                const VehicleParams& params, const StateVec3& init,
                                const std::vector<ControlInput>& inputs, double dt) {
  if (inputs.size() < 2) {
    throw std::invalid_argument("rollout_model: need at least 2 input samples");
  }

  plant::Trajectory traj;
  traj.name = std::string("rollout-") + model_name(id);
  traj.truth.reserve(inputs.size());
  traj.sensors.reserve(inputs.size());

  StateVec3 state = init;
  Accel accel;  // instantaneous, chained as the next step's load input
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const auto meas = model_measurement(id, state, inputs[k], tire, params, accel);
    accel = {meas[0], meas[1]};

    plant::GroundTruthFrame frame;
    frame.t = t;
    frame.x = x;
    frame.y = y;
    frame.yaw = yaw;
    frame.vx = state.vx;
    frame.vy = state.vy;
    frame.yaw_rate = state.yaw_rate;
    frame.ax = accel.ax;
    frame.ay = accel.ay;
    frame.beta = std::atan2(state.vy, state.vx);
    traj.truth.push_back(frame);

    plant::SensorFrame sensor;
    sensor.t = t;
    sensor.ax = accel.ax;
    sensor.ay = accel.ay;
    sensor.yaw_rate = state.yaw_rate;
    sensor.wheel_speed = inputs[k].wheel_speed;
    sensor.steer = inputs[k].steer;
    traj.sensors.push_back(sensor);

    if (k + 1 == inputs.size()) {
      break;
    }
    // Pose integration mirrors the model step so the logged pose stays
    // consistent; the compared state does not depend on it.
    x += dt * (state.vx * std::cos(yaw) - state.vy * std::sin(yaw));
    y += dt * (state.vx * std::sin(yaw) + state.vy * std::cos(yaw));
    yaw += dt * state.yaw_rate;
    state = model_step(id, state, inputs[k + 1], dt, tire, params, accel).state;
  }
  return traj;
}

}  // namespace vmv::validity
