#pragma once

#include <vector>

#include "vmv/estimation/ekf.hpp"
#include "vmv/validity/compare.hpp"
#include "vmv/validity/model.hpp"

namespace vmv::estimation {

/// Diagonal process and measurement covariances.
struct NoiseConfig {
  Vec3 process = Vec3::Constant(1e-4);      // Q diagonal
  Vec3 measurement = Vec3::Constant(1e-3);  // R diagonal

  Mat3 process_mat() const { return process.asDiagonal(); }
  Mat3 measurement_mat() const { return measurement.asDiagonal(); }
  void validate() const;
};

struct Measurement {
  double ax = 0.0;
  double ay = 0.0;
  double yaw_rate = 0.0;
};

/// Per-trajectory covariance selection: Q from the variance of the signed
/// one-step model residuals, R from the variance of (sensor - truth) on the
/// measured channels; both floored at 1e-8.
NoiseConfig covariance_from_errors(const plant::Trajectory& traj,
                                   validity::ModelId model,
                                   const dynamics::TireParams& tire,
                                   const dynamics::VehicleParams& params);

struct ObserverEstimate {
  double t = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double yaw_rate = 0.0;
  double e_vx = 0.0;
  double e_vy = 0.0;
  double e_yaw_rate = 0.0;
};

struct ObserverRun {
  std::vector<ObserverEstimate> estimates;
  double mae_vx = 0.0;
  double mae_vy = 0.0;
  double mae_yaw_rate = 0.0;
  double mean_nis = 0.0;
  /// Covariance health over the run.
  double min_cov_eigenvalue = 0.0;
  double max_cov_asymmetry = 0.0;

  double mae(int variable) const {
    return variable == 0 ? mae_vx : variable == 1 ? mae_vy : mae_yaw_rate;
  }
};

/// Runs the model-based EKF over the sensor stream at 50 Hz (predict with
/// the sensor inputs, update with the measured accelerations and yaw rate).
/// The initial state comes from the first truth frame, P = diag(1e-2).
/// Throws FilterFault with the failing step index on numerical failure.
ObserverRun run_observer(const plant::Trajectory& traj, validity::ModelId model,
                         const dynamics::TireParams& tire,
                         const dynamics::VehicleParams& params,
                         const NoiseConfig& noise);

}  // namespace vmv::estimation
