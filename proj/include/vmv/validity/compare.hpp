#pragma once

#include <vector>

#include "vmv/validity/model.hpp"

namespace vmv::validity {

/// Absolute one-step prediction errors at one comparison instant.
struct StepError {
  double t = 0.0;
  double e_vx = 0.0;
  double e_vy = 0.0;
  double e_yaw_rate = 0.0;
  double ay_truth = 0.0;  // ground-truth lateral acceleration at the instant
};

/// Signed one-step residuals (model minus truth); the statistic behind
/// the per-trajectory process covariances.
struct ResidualRecord {
  double t = 0.0;
  double r_vx = 0.0;
  double r_vy = 0.0;
  double r_yaw_rate = 0.0;
};

/// One-step comparison over the sensor grid: at each step the model state
/// is seeded from ground truth, advanced once with the noisy sensor inputs,
/// and the result compared against the next ground-truth sample. A
/// trajectory with N comparison-grid frames yields exactly N-1 records.
std::vector<StepError> compare_trajectory(const plant::Trajectory& traj, ModelId id,
                                          const dynamics::TireParams& tire,
                                          const dynamics::VehicleParams& params);

/// Same walk, signed residuals.
std::vector<ResidualRecord> one_step_residuals(const plant::Trajectory& traj,
                                               ModelId id,
                                               const dynamics::TireParams& tire,
                                               const dynamics::VehicleParams& params);

/// Truth frame coinciding with time t (1e-9 tolerance); throws
/// AlignmentError when no frame matches.
const plant::GroundTruthFrame& truth_at(const plant::Trajectory& traj, double t);

}  // namespace vmv::validity
