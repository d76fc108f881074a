#include <doctest.h>

#include <cmath>
#include <random>

#include "vmv/errors.hpp"
#include "vmv/estimation/observer.hpp"
#include "vmv/harness/config.hpp"
#include "vmv/plant/maneuver.hpp"

using namespace vmv;
using estimation::EkfState;
using estimation::Fn3;
using estimation::Mat3;
using estimation::Vec3;
using validity::ModelId;

namespace {

std::vector<dynamics::ControlInput> synthetic_inputs(std::size_t n, double speed,
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

// Bicycle-Pacejka transition at a fixed input, as a plain callable.
Fn3 bicycle_transition(const harness::ExperimentConfig& cfg,
                       const dynamics::ControlInput& input) {
  const auto tire = tire_for_model(ModelId::kDbmPacejka, cfg.tires);
  return [&cfg, tire, input](const Vec3& z) -> Vec3 {
    const auto s = validity::model_step(ModelId::kDbmPacejka,
                                        {z[0], z[1], z[2]}, input, 0.02, tire,
                                        cfg.vehicle, {0.0, 0.0});
    return Vec3(s.state.vx, s.state.vy, s.state.yaw_rate);
  };
}

// Hand-rolled linear Kalman filter on raw arrays; the independent oracle
// for the EKF recursion.
struct RawKf {
  double z[3];
  double p[3][3];

  void predict(const double a[3], const double q[3]) {
    for (int i = 0; i < 3; ++i) {
      z[i] *= a[i];
    }
    double next[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        next[i][j] = a[i] * p[i][j] * a[j];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        p[i][j] = 0.5 * (next[i][j] + next[j][i]);
      }
      p[i][i] += q[i];
    }
  }

  void update(const double m[3], const double r[3]) {
    // H = I: S = P + R.
    double s[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        s[i][j] = p[i][j];
      }
      s[i][i] += r[i];
    }
    // 3x3 inverse by adjugate.
    const double det =
        s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) -
        s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
        s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
    double inv[3][3];
    inv[0][0] = (s[1][1] * s[2][2] - s[1][2] * s[2][1]) / det;
    inv[0][1] = (s[0][2] * s[2][1] - s[0][1] * s[2][2]) / det;
    inv[0][2] = (s[0][1] * s[1][2] - s[0][2] * s[1][1]) / det;
    inv[1][0] = (s[1][2] * s[2][0] - s[1][0] * s[2][2]) / det;
    inv[1][1] = (s[0][0] * s[2][2] - s[0][2] * s[2][0]) / det;
    inv[1][2] = (s[0][2] * s[1][0] - s[0][0] * s[1][2]) / det;
    inv[2][0] = (s[1][0] * s[2][1] - s[1][1] * s[2][0]) / det;
    inv[2][1] = (s[0][1] * s[2][0] - s[0][0] * s[2][1]) / det;
    inv[2][2] = (s[0][0] * s[1][1] - s[0][1] * s[1][0]) / det;

    double gain[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        gain[i][j] = 0.0;
        for (int k = 0; k < 3; ++k) {
          gain[i][j] += p[i][k] * inv[k][j];
        }
      }
    }
    double innov[3];
    for (int i = 0; i < 3; ++i) {
      innov[i] = m[i] - z[i];
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        z[i] += gain[i][j] * innov[j];
      }
    }
    double ikh[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        ikh[i][j] = (i == j ? 1.0 : 0.0) - gain[i][j];
      }
    }
    double next[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        next[i][j] = 0.0;
        for (int k = 0; k < 3; ++k) {
          next[i][j] += ikh[i][k] * p[k][j];
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        p[i][j] = 0.5 * (next[i][j] + next[j][i]);
      }
    }
  }
};

}  // namespace

TEST_CASE("finite-difference jacobian") {
  SUBCASE("identity map") {
    const Fn3 f = [](const Vec3& z) { return z; };
    const Mat3 jac = estimation::jacobian_fd(f, Vec3(0.0, 0.0, 0.0));
    CHECK((jac - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("recovers a linear map within 1e-8") {
    Mat3 a;
    a << 0.9, 0.02, -0.4, 0.1, 1.3, 0.05, -0.2, 0.7, 0.6;
    const Fn3 f = [&](const Vec3& z) -> Vec3 { return a * z; };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
      const Vec3 z(uni(rng), uni(rng), uni(rng));
      const Mat3 jac = estimation::jacobian_fd(f, z);
      CHECK((jac - a).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  SUBCASE("richardson shrink on the bicycle dynamics") {
    const auto cfg = harness::default_config();
    dynamics::ControlInput input;
    input.steer = 0.06;
    const double omega = 20.0 / cfg.vehicle.tire_radius;
    input.wheel_speed = {omega, omega, 0.98 * omega, 0.98 * omega};
    const auto f = bicycle_transition(cfg, input);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uvx(8.0, 28.0);
    std::uniform_real_distribution<double> uvy(-1.5, 1.5);
    std::uniform_real_distribution<double> uyr(-0.4, 0.4);
    for (int i = 0; i < 100; ++i) {
      const Vec3 z(uvx(rng), uvy(rng), uyr(rng));
      const Mat3 j1 = estimation::jacobian_fd(f, z, 1e-3);
      const Mat3 j2 = estimation::jacobian_fd(f, z, 5e-4);
      const Mat3 j3 = estimation::jacobian_fd(f, z, 2.5e-4);
      const double e1 = (j1 - j2).norm();
      const double e2 = (j2 - j3).norm();
      CHECK((e1 >= 2.0 * e2 || e1 < 1e-10));
    }
  }

  SUBCASE("mid-corner entries match a richardson reference within 1e-4") {
    const auto cfg = harness::default_config();
    dynamics::ControlInput input;
    input.steer = 0.08;
    const double omega = 18.0 / cfg.vehicle.tire_radius;
    input.wheel_speed = {omega, omega, omega, omega};
    const auto f = bicycle_transition(cfg, input);

    const Vec3 z(18.0, -0.6, 0.25);
    const Mat3 coarse = estimation::jacobian_fd(f, z, 1e-3);
    const Mat3 fine = estimation::jacobian_fd(f, z, 5e-4);
    const Mat3 reference = (4.0 * fine - coarse) / 3.0;
    const Mat3 production = estimation::jacobian_fd(f, z);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const double tol = 1e-4 * std::max(1.0, std::abs(reference(r, c)));
        CHECK(std::abs(production(r, c) - reference(r, c)) <= tol);
      }
    }
  }
}

TEST_CASE("ekf matches a hand-rolled kalman filter on a linear system") {
  // Diagonal linear system at a small state scale: the finite-difference
  // transition matrix is then exact to ~1e-15 and the two recursions track
  // each other to well below 1e-12.
  const double a[3] = {0.92, 0.85, 0.78};
  const double q[3] = {1e-10, 2e-10, 1.5e-10};
  const double r[3] = {4e-9, 4e-9, 4e-9};

  const Fn3 f = [&](const Vec3& z) -> Vec3 {
    return Vec3(a[0] * z[0], a[1] * z[1], a[2] * z[2]);
  };
  const Fn3 g = [](const Vec3& z) { return z; };

  Mat3 q_mat = Mat3::Zero();
  Mat3 r_mat = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    q_mat(i, i) = q[i];
    r_mat(i, i) = r[i];
  }

  EkfState ekf;
  ekf.state = Vec3(2e-4, -1e-4, 3e-4);
  ekf.cov = Mat3::Identity() * 1e-8;

  RawKf kf;
  for (int i = 0; i < 3; ++i) {
    kf.z[i] = ekf.state[i];
    for (int j = 0; j < 3; ++j) {
      kf.p[i][j] = ekf.cov(i, j);
    }
  }

  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 truth = ekf.state;

  for (int step = 0; step < 100; ++step) {
    truth = f(truth) + Vec3(std::sqrt(q[0]) * gauss(rng),
                            std::sqrt(q[1]) * gauss(rng),
                            std::sqrt(q[2]) * gauss(rng));
    const Vec3 meas = truth + Vec3(std::sqrt(r[0]) * gauss(rng),
                                   std::sqrt(r[1]) * gauss(rng),
                                   std::sqrt(r[2]) * gauss(rng));

    const auto predicted = estimation::ekf_predict(ekf, f, q_mat);
    ekf = estimation::ekf_update(predicted, meas, g, r_mat).state;

    kf.predict(a, q);
    const double m[3] = {meas[0], meas[1], meas[2]};
    kf.update(m, r);

    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(ekf.state[i] - kf.z[i]) < 1e-12);
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(ekf.cov(i, j) - kf.p[i][j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("ekf predict properties") {
  const auto cfg = harness::default_config();

  SUBCASE("identity transition adds Q exactly") {
    const Fn3 f = [](const Vec3& z) { return z; };
    EkfState prior;
    prior.state = Vec3::Zero();
    prior.cov = Mat3::Identity() * 0.25;
    Mat3 q = Mat3::Zero();
    q.diagonal() << 0.5, 0.25, 0.125;
    const auto next = estimation::ekf_predict(prior, f, q);
    CHECK((next.cov - (prior.cov + q)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(next.state == prior.state);
  }

  SUBCASE("equilibrium state is a fixed point with zero process noise") {
    dynamics::ControlInput input;
    const double omega = 20.0 / cfg.vehicle.tire_radius;
    input.wheel_speed = {omega, omega, omega, omega};
    const auto f = bicycle_transition(cfg, input);
    EkfState prior;
    prior.state = Vec3(20.0, 0.0, 0.0);
    prior.cov = Mat3::Identity() * 1e-2;
    const auto next = estimation::ekf_predict(prior, f, Mat3::Zero());
    CHECK((next.state - prior.state).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("one predict equals the validity one-step prediction") {
    const auto traj_inputs = synthetic_inputs(10, 20.0, cfg.vehicle.tire_radius);
    const auto& input = traj_inputs[5];
    const auto tire = tire_for_model(ModelId::kDbmPacejka, cfg.tires);
    const dynamics::Accel load{0.4, 2.5};
    const Fn3 f = [&](const Vec3& z) -> Vec3 {
      const auto s = validity::model_step(ModelId::kDbmPacejka,
                                          {z[0], z[1], z[2]}, input, 0.02, tire,
                                          cfg.vehicle, load);
      return Vec3(s.state.vx, s.state.vy, s.state.yaw_rate);
    };
    EkfState prior;
    prior.state = Vec3(19.0, 0.3, 0.12);
    const auto next = estimation::ekf_predict(prior, f, Mat3::Zero());
    const auto direct = validity::model_step(
        ModelId::kDbmPacejka, {19.0, 0.3, 0.12}, input, 0.02, tire, cfg.vehicle,
        load);
    CHECK(next.state[0] == direct.state.vx);
    CHECK(next.state[1] == direct.state.vy);
    CHECK(next.state[2] == direct.state.yaw_rate);
  }
}

TEST_CASE("ekf update properties") {
  const Fn3 g = [](const Vec3& z) -> Vec3 {
    return Vec3(0.3 * z[0] + 0.1 * z[1], z[1] - 0.2 * z[2], z[2]);
  };
  EkfState prior;
  prior.state = Vec3(10.0, 0.5, 0.2);
  prior.cov = Mat3::Identity() * 0.04;

  SUBCASE("near-infinite R leaves the prior unchanged") {
    const Mat3 r = Mat3::Identity() * 1e12;
    const auto posterior = estimation::ekf_update(prior, Vec3(5.0, 5.0, 5.0), g, r);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(posterior.state.state[i] - prior.state[i]) <=
            1e-6 * std::abs(prior.state[i]));
    }
  }

  SUBCASE("zero innovation keeps the state and contracts the covariance") {
    const Mat3 r = Mat3::Identity() * 1e-3;
    const auto posterior = estimation::ekf_update(prior, g(prior.state), g, r);
    CHECK((posterior.state.state - prior.state).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(posterior.state.cov.trace() < prior.cov.trace());
    CHECK(estimation::min_eigenvalue(posterior.state.cov) > -1e-9);
  }

  SUBCASE("singular innovation covariance faults") {
    EkfState degenerate;
    degenerate.state = Vec3::Zero();
    degenerate.cov = Mat3::Zero();
    const Fn3 flat = [](const Vec3&) { return Vec3::Zero(); };
    CHECK_THROWS_AS(
        estimation::ekf_update(degenerate, Vec3::Zero(), flat, Mat3::Zero()),
        NumericalFault);
  }
}

TEST_CASE("covariance selection from errors") {
  const auto cfg = harness::default_config();
  const auto id = ModelId::kDbmPacejka;
  const auto tire = tire_for_model(id, cfg.tires);

  SUBCASE("noiseless sensors floor R at 1e-8") {
    const auto inputs = synthetic_inputs(300, 20.0, cfg.vehicle.tire_radius);
    const auto traj =
        validity::rollout_model(id, tire, cfg.vehicle, {20.0, 0.0, 0.0}, inputs);
    const auto noise = estimation::covariance_from_errors(traj, id, tire, cfg.vehicle);
    for (int i = 0; i < 3; ++i) {
      CHECK(noise.measurement[i] == 1e-8);
      CHECK(noise.process[i] == 1e-8);  // exact model: floored too
    }
  }

  SUBCASE("measured yaw-rate variance recovers the configured sigma") {
    const auto inputs = synthetic_inputs(10001, 20.0, cfg.vehicle.tire_radius);
    auto traj =
        validity::rollout_model(id, tire, cfg.vehicle, {20.0, 0.0, 0.0}, inputs);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 0.002);
    for (auto& s : traj.sensors) {
      s.yaw_rate += gauss(rng);
    }
    const auto noise = estimation::covariance_from_errors(traj, id, tire, cfg.vehicle);
    CHECK(noise.measurement[2] >= 0.9 * 0.002 * 0.002);
    CHECK(noise.measurement[2] <= 1.1 * 0.002 * 0.002);
  }

  SUBCASE("a worse model receives a larger Q") {
    auto exp_cfg = harness::default_config();
    plant::ManeuverSpec spec;
    spec.kind = plant::ManeuverKind::kSlalom;
    spec.target_ay_max = 8.0;
    spec.initial_speed = 18.0;
    spec.duration = 10.0;
    spec.seed = 31;
    auto run = plant::generate_maneuver(spec, exp_cfg.plant_config(), exp_cfg.road);
    run.trajectory.name = "hi";
    run.trajectory.sensors = plant::sample_sensors(
        run.trajectory.truth, run.actuation, exp_cfg.noise, 77);

    const auto q_linear = estimation::covariance_from_errors(
        run.trajectory, ModelId::kDbmLinear,
        tire_for_model(ModelId::kDbmLinear, exp_cfg.tires), exp_cfg.vehicle);
    const auto q_pacejka = estimation::covariance_from_errors(
        run.trajectory, ModelId::kDbmPacejka,
        tire_for_model(ModelId::kDbmPacejka, exp_cfg.tires), exp_cfg.vehicle);
    for (int i = 0; i < 3; ++i) {
      CHECK(q_linear.process[i] >= q_pacejka.process[i]);
    }
  }

  SUBCASE("short trajectories are rejected") {
    const auto inputs = synthetic_inputs(50, 20.0, cfg.vehicle.tire_radius);
    const auto traj =
        validity::rollout_model(id, tire, cfg.vehicle, {20.0, 0.0, 0.0}, inputs);
    CHECK_THROWS_AS(estimation::covariance_from_errors(traj, id, tire, cfg.vehicle),
                    DataError);
  }
}

TEST_CASE("measurement function gap tracks the model error") {
  // g on a truth state reproduces the plant-logged accelerations up to the
  // model's own force error; the gap shrinks with the better tire model.
  auto cfg = harness::default_config();
  plant::ManeuverSpec spec;
  spec.kind = plant::ManeuverKind::kSlalom;
  spec.target_ay_max = 8.0;
  spec.initial_speed = 18.0;
  spec.duration = 10.0;
  spec.seed = 91;
  auto run = plant::generate_maneuver(spec, cfg.plant_config(), cfg.road);
  run.trajectory.name = "gap";
  run.trajectory.sensors = plant::sample_sensors(
      run.trajectory.truth, run.actuation, plant::NoiseSigmas{0, 0, 0, 0}, 1);

  auto mean_ay_gap = [&](ModelId id) {
    const auto tire = tire_for_model(id, cfg.tires);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : run.trajectory.sensors) {
      const auto& truth = validity::truth_at(run.trajectory, s.t);
      dynamics::ControlInput u;
      u.steer = s.steer;
      u.wheel_speed = s.wheel_speed;
      const auto g = validity::model_measurement(
          id, {truth.vx, truth.vy, truth.yaw_rate}, u, tire, cfg.vehicle,
          {truth.ax, truth.ay});
      sum += std::abs(g[1] - truth.ay);
      ++n;
    }
    return sum / n;
  };

  const double gap_linear = mean_ay_gap(ModelId::kDbmLinear);
  const double gap_pacejka = mean_ay_gap(ModelId::kDbmPacejka);
  CHECK(gap_pacejka < gap_linear);
  CHECK(gap_pacejka < 1.0);  // sane magnitude on an 8 m/s^2 run
}

TEST_CASE("observer scenarios") {
  const auto cfg = harness::default_config();
  const auto id = ModelId::kDbmPacejka;
  const auto tire = tire_for_model(id, cfg.tires);
  const auto inputs = synthetic_inputs(1500, 20.0, cfg.vehicle.tire_radius);
  const auto traj =
      validity::rollout_model(id, tire, cfg.vehicle, {20.0, 0.0, 0.0}, inputs);

  estimation::NoiseConfig small;
  small.process = Vec3::Constant(1e-8);
  small.measurement = Vec3::Constant(1e-8);

  SUBCASE("exact-model tracking") {
    const auto run = estimation::run_observer(traj, id, tire, cfg.vehicle, small);
    CHECK(run.mae_vx < 1e-3);
    CHECK(run.mae_vy < 1e-3);
    CHECK(run.mae_yaw_rate < 1e-3);
    CHECK(run.min_cov_eigenvalue > -1e-9);
    CHECK(run.max_cov_asymmetry < 1e-9);
    CHECK(run.estimates.size() == traj.sensors.size() - 1);
  }

  SUBCASE("initial offset decays within 5 seconds") {
    auto offset = traj;
    offset.truth[0].vx += 1.0;
    const auto run = estimation::run_observer(offset, id, tire, cfg.vehicle, small);
    for (const auto& e : run.estimates) {
      if (e.t >= 5.0) {
        CHECK(e.e_vx < 0.01);
      }
    }
  }

  SUBCASE("innovation whiteness under matched noise") {
    auto noisy = traj;
    std::mt19937_64 rng(555);
    std::normal_distribution<double> acc(0.0, 0.05);
    std::normal_distribution<double> yaw(0.0, 0.002);
    for (auto& s : noisy.sensors) {
      s.ax += acc(rng);
      s.ay += acc(rng);
      s.yaw_rate += yaw(rng);
    }
    estimation::NoiseConfig matched;
    matched.process = Vec3::Constant(1e-10);
    matched.measurement = Vec3(0.05 * 0.05, 0.05 * 0.05, 0.002 * 0.002);
    const auto run = estimation::run_observer(noisy, id, tire, cfg.vehicle, matched);
    REQUIRE(run.estimates.size() >= 1000);
    CHECK(run.mean_nis >= 2.0);
    CHECK(run.mean_nis <= 4.0);
  }

  SUBCASE("a non-finite measurement faults with the step index") {
    auto broken = traj;
    broken.sensors[40].ax = std::numeric_limits<double>::quiet_NaN();
    try {
      estimation::run_observer(broken, id, tire, cfg.vehicle, small);
      FAIL("expected FilterFault");
    } catch (const FilterFault& e) {
      CHECK(e.step() == 40);
    }
  }
}
