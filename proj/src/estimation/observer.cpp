#include "vmv/estimation/observer.hpp"

#include <cmath>
#include <stdexcept>

#include "vmv/errors.hpp"

namespace vmv::estimation {

namespace {

constexpr double kCovFloor = 1e-8;
constexpr double kInitialCov = 1e-2;

double variance(const std::vector<double>& xs) {
  if (xs.empty()) {
    return 0.0;
  }
  double mean = 0.0;
  for (double x : xs) {
    mean += x;
  }
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) {
    var += (x - mean) * (x - mean);
  }
  return var / xs.size();
}

dynamics::ControlInput input_from_sensor(const plant::SensorFrame& s) {
  dynamics::ControlInput u;
  u.steer = s.steer;
  u.wheel_speed = s.wheel_speed;
  return u;
}

}  // namespace

void NoiseConfig::validate() const {
  if ((process.array() <= 0.0).any() || (measurement.array() <= 0.0).any()) {
    throw std::invalid_argument("noise config: diagonals must be > 0");
  }
}

NoiseConfig covariance_from_errors(const plant::Trajectory& traj,
                                   validity::ModelId model,
                                   const dynamics::TireParams& tire,
                                   const dynamics::VehicleParams& params) {
  const auto residuals = validity::one_step_residuals(traj, model, tire, params);
  if (residuals.size() < 100) {
    throw DataError("covariance_from_errors: trajectory '" + traj.name +
                    "' too short (" + std::to_string(residuals.size()) +
                    " residual steps, need >= 100)");
  }

  std::vector<double> r_vx, r_vy, r_yaw;
  r_vx.reserve(residuals.size());
  r_vy.reserve(residuals.size());
  r_yaw.reserve(residuals.size());
  for (const auto& r : residuals) {
    r_vx.push_back(r.r_vx);
    r_vy.push_back(r.r_vy);
    r_yaw.push_back(r.r_yaw_rate);
  }

  std::vector<double> m_ax, m_ay, m_yaw;
  m_ax.reserve(traj.sensors.size());
  m_ay.reserve(traj.sensors.size());
  m_yaw.reserve(traj.sensors.size());
  for (const auto& s : traj.sensors) {
    const auto& truth = validity::truth_at(traj, s.t);
    m_ax.push_back(s.ax - truth.ax);
    m_ay.push_back(s.ay - truth.ay);
    m_yaw.push_back(s.yaw_rate - truth.yaw_rate);
  }

  NoiseConfig noise;
  noise.process =
      Vec3(std::max(variance(r_vx), kCovFloor), std::max(variance(r_vy), kCovFloor),
           std::max(variance(r_yaw), kCovFloor));
  noise.measurement =
      Vec3(std::max(variance(m_ax), kCovFloor), std::max(variance(m_ay), kCovFloor),
           std::max(variance(m_yaw), kCovFloor));
  return noise;
}

ObserverRun run_observer(const plant::Trajectory& traj, validity::ModelId model,
                         const dynamics::TireParams& tire,
                         const dynamics::VehicleParams& params,
                         const NoiseConfig& noise) {
  noise.validate();
  const auto& sensors = traj.sensors;
  if (sensors.size() < 2) {
    throw DataError("run_observer: trajectory '" + traj.name +
                    "' has fewer than 2 sensor frames");
  }

  const auto& first = validity::truth_at(traj, sensors.front().t);
  EkfState filter;
  filter.state = Vec3(first.vx, first.vy, first.yaw_rate);
  filter.cov = Mat3::Identity() * kInitialCov;

  const Mat3 q = noise.process_mat();
  const Mat3 r = noise.measurement_mat();

  ObserverRun run;
  run.estimates.reserve(sensors.size() - 1);
  run.min_cov_eigenvalue = min_eigenvalue(filter.cov);
  run.max_cov_asymmetry = 0.0;

  dynamics::Accel load{0.0, 0.0};
  double sum_nis = 0.0;
  double sum_e[3] = {0.0, 0.0, 0.0};

  for (std::size_t k = 1; k < sensors.size(); ++k) {
    const double dt = sensors[k].t - sensors[k - 1].t;
    if (dt <= 0.0) {
      throw AlignmentError("run_observer: sensor timestamps not increasing");
    }
    const auto input = input_from_sensor(sensors[k]);

    // The step is evaluated once for the realized accelerations that feed
    // the next load transfer; the filter closures share the same load.
    const dynamics::Accel load_k = load;
    const auto step = validity::model_step(
        model, {filter.state[0], filter.state[1], filter.state[2]}, input, dt,
        tire, params, load_k);
    load = step.accel;

    const Fn3 f = [&](const Vec3& z) -> Vec3 {
      const auto s =
          validity::model_step(model, {z[0], z[1], z[2]}, input, dt, tire,
                               params, load_k);
      return Vec3(s.state.vx, s.state.vy, s.state.yaw_rate);
    };
    const Fn3 g = [&](const Vec3& z) -> Vec3 {
      const auto m = validity::model_measurement(model, {z[0], z[1], z[2]},
                                                 input, tire, params, load_k);
      return Vec3(m[0], m[1], m[2]);
    };

    try {
      const auto predicted = ekf_predict(filter, f, q);
      const Vec3 meas(sensors[k].ax, sensors[k].ay, sensors[k].yaw_rate);
      const auto updated = ekf_update(predicted, meas, g, r);
      filter = updated.state;
      sum_nis += updated.nis;
    } catch (const NumericalFault& fault) {
      throw FilterFault(k, fault.what());
    }

    run.min_cov_eigenvalue =
        std::min(run.min_cov_eigenvalue, min_eigenvalue(filter.cov));
    run.max_cov_asymmetry =
        std::max(run.max_cov_asymmetry, max_asymmetry(filter.cov));

    const auto& truth = validity::truth_at(traj, sensors[k].t);
    ObserverEstimate est;
    est.t = sensors[k].t;
    est.vx = filter.state[0];
    est.vy = filter.state[1];
    est.yaw_rate = filter.state[2];
    est.e_vx = std::abs(est.vx - truth.vx);
    est.e_vy = std::abs(est.vy - truth.vy);
    est.e_yaw_rate = std::abs(est.yaw_rate - truth.yaw_rate);
    run.estimates.push_back(est);
    sum_e[0] += est.e_vx;
    sum_e[1] += est.e_vy;
    sum_e[2] += est.e_yaw_rate;
  }

  const double n = static_cast<double>(run.estimates.size());
  run.mae_vx = sum_e[0] / n;
  run.mae_vy = sum_e[1] / n;
  run.mae_yaw_rate = sum_e[2] / n;
  run.mean_nis = sum_nis / n;
  return run;
}

}  // namespace vmv::estimation
