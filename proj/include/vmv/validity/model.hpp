#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "vmv/dynamics/states.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"
#include "vmv/plant/trajectory.hpp"

namespace vmv::validity {

/// The four candidate vehicle/tire model combinations.
enum class ModelId {
  kDbmLinear,
  kDbmDugoff,
  kDbmPacejka,
  kFwmPacejka,
};

inline constexpr std::array<ModelId, 4> kAllModels = {
    ModelId::kDbmLinear,
    ModelId::kDbmDugoff,
    ModelId::kDbmPacejka,
    ModelId::kFwmPacejka,
};

const char* model_name(ModelId id);
std::optional<ModelId> model_from_name(std::string_view name);

/// Tire parameter sets per tire family; each model picks its own.
struct TireSet {
  dynamics::LinearTire linear;
  dynamics::DugoffTire dugoff;
  dynamics::PacejkaTire pacejka;
};

dynamics::TireParams tire_for_model(ModelId id, const TireSet& tires);

/// The compared state: longitudinal velocity, lateral velocity, yaw rate.
struct StateVec3 {
  double vx = 0.0;
  double vy = 0.0;
  double yaw_rate = 0.0;
};

struct ModelStep {
  StateVec3 state;
  dynamics::Accel accel;  // force-sum accelerations realized by the step
};

/// One dt step of the candidate model on the compared 3-state. Pose states
/// are dropped (the velocity dynamics do not depend on them); the
/// four-wheel model takes wheel speeds from the input and keeps roll and
/// pitch at zero. `load_accel` feeds the quasi-static load transfer.
ModelStep model_step(ModelId id, const StateVec3& state,
                     const dynamics::ControlInput& input, double dt,
                     const dynamics::TireParams& tire,
                     const dynamics::VehicleParams& params,
                     const dynamics::Accel& load_accel = {});

/// Measurement model: body-frame (ax, ay) from the model's tire forces plus
/// the yaw-rate passthrough.
std::array<double, 3> model_measurement(ModelId id, const StateVec3& state,
                                        const dynamics::ControlInput& input,
                                        const dynamics::TireParams& tire,
                                        const dynamics::VehicleParams& params,
                                        const dynamics::Accel& load_accel = {});

/// Rolls a candidate model under the given input series (dt spacing) and
/// logs a trajectory with noiseless sensor frames on the same grid. Used
/// for self-consistency checks and exact-model observer scenarios.
plant::Trajectory rollout_model(ModelId id, const dynamics::TireParams& tire,
                                const dynamics::VehicleParams& params,
                                const StateVec3& init,
                                const std::vector<dynamics::ControlInput>& inputs,
                                double dt = 0.02);

}  // namespace vmv::validity
