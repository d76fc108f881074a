#pragma once

#include <Eigen/Dense>
#include <functional>

namespace vmv::estimation {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Filter state: estimate and covariance. The covariance is re-symmetrized
/// after every update; tests assert eigenvalues >= -1e-9 throughout.
struct EkfState {
  Vec3 state = Vec3::Zero();
  Mat3 cov = Mat3::Identity();
};

using Fn3 = std::function<Vec3(const Vec3&)>;

/// Central-difference Jacobian with per-component step
/// h_i = max(step_scale, step_scale * |z_i|). Throws NumericalFault on
/// non-finite entries.
Mat3 jacobian_fd(const Fn3& f, const Vec3& z, double step_scale = 1e-6);

/// Prediction step: state through f, covariance through the
/// finite-difference transition matrix plus Q.
EkfState ekf_predict(const EkfState& prior, const Fn3& f, const Mat3& process_noise);

struct EkfUpdateResult {
  EkfState state;
  double nis = 0.0;  // innovation' * S^-1 * innovation
};

/// Measurement update with g evaluated at the prior mean. Throws
/// FilterFault-compatible NumericalFault when the innovation covariance is
/// not invertible.
EkfUpdateResult ekf_update(const EkfState& prior, const Vec3& measurement,
                           const Fn3& g, const Mat3& measurement_noise);

/// Smallest eigenvalue of the symmetric part; covariance-health statistic.
double min_eigenvalue(const Mat3& m);

/// Largest absolute asymmetry |P - P'|.
double max_asymmetry(const Mat3& m);

}  // namespace vmv::estimation
