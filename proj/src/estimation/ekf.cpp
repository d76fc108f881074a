#include "vmv/estimation/ekf.hpp"

#include <cmath>

#include "vmv/errors.hpp"

namespace vmv::estimation {

Mat3 jacobian_fd(const Fn3& f, const Vec3& z, double step_scale) {
  Mat3 jac;
  for (int i = 0; i < 3; ++i) {
    const double h = std::max(step_scale, step_scale * std::abs(z[i]));
    Vec3 plus = z;
    Vec3 minus = z;
    plus[i] += h;
    minus[i] -= h;
    jac.col(i) = (f(plus) - f(minus)) / (2.0 * h);
  }
  if (!jac.allFinite()) {
    throw NumericalFault("jacobian_fd: non-finite entries");
  }
  return jac;
}

EkfState ekf_predict(const EkfState& prior, const Fn3& f, const Mat3& process_noise) {
  EkfState next;
  next.state = f(prior.state);
  if (!next.state.allFinite()) {
    throw NumericalFault("ekf_predict: non-finite state propagation");
  }
  const Mat3 trans = jacobian_fd(f, prior.state);
  next.cov = trans * prior.cov * trans.transpose() + process_noise;
  next.cov = 0.5 * (next.cov + next.cov.transpose().eval());
  return next;
}

EkfUpdateResult ekf_update(const EkfState& prior, const Vec3& measurement,
                           const Fn3& g, const Mat3& measurement_noise) {
  const Mat3 obs = jacobian_fd(g, prior.state);
  const Vec3 innovation = measurement - g(prior.state);
  const Mat3 s = obs * prior.cov * obs.transpose() + measurement_noise;

  Eigen::FullPivLU<Mat3> lu(s);
  if (!lu.isInvertible()) {
    throw NumericalFault("ekf_update: singular innovation covariance, rcond=" +
                         std::to_string(lu.rcond()));
  }
  const Mat3 s_inv = lu.inverse();
  const Mat3 gain = prior.cov * obs.transpose() * s_inv;

  EkfUpdateResult result;
  result.state.state = prior.state + gain * innovation;
  result.state.cov = (Mat3::Identity() - gain * obs) * prior.cov;
  result.state.cov =
      0.5 * (result.state.cov + result.state.cov.transpose().eval());
  result.nis = innovation.dot(s_inv * innovation);
  if (!result.state.state.allFinite() || !result.state.cov.allFinite()) {
    throw NumericalFault("ekf_update: non-finite posterior");
  }
  return result;
}

double min_eigenvalue(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Mat3> solver(sym);
  return solver.eigenvalues().minCoeff();
}

double max_asymmetry(const Mat3& m) {
  return (m - m.transpose().eval()).cwiseAbs().maxCoeff();
}

}  // namespace vmv::estimation
