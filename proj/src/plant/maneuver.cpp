#include "vmv/plant/maneuver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "vmv/errors.hpp"

namespace vmv::plant {

namespace {

constexpr double kControlDt = 0.01;    // control + logging rate [s]
constexpr double kSteerStop = 0.55;    // amplitude cap below the 0.6 rad stop
constexpr int kMaxIterations = 8;
constexpr double kPi = 3.14159265358979323846;

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

// Half-sine lobe on [0, 1].
double lobe(double u) {
  return (u >= 0.0 && u <= 1.0) ? std::sin(kPi * u) : 0.0;
}

// Seed-derived shape parameters, drawn once per spec.
struct ShapeJitter {
  double freq = 0.0;
  double sweep = 0.0;
  double phase = 0.0;
};

ShapeJitter make_jitter(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ShapeJitter j;
  j.freq = uni(rng);
  j.sweep = uni(rng);
  j.phase = uni(rng);
  return j;
}

double steering_angle(const ManeuverSpec& spec, const ShapeJitter& jit,
                      double amplitude, double t) {
  const double ramp = smoothstep(t / 2.0);
  switch (spec.kind) {
    case ManeuverKind::kStepSteer:
      return amplitude * smoothstep((t - 1.0) / 0.7);
    case ManeuverKind::kSineSweep: {
      const double f0 = 0.12;
      const double f1 = 0.40 * (1.0 + 0.15 * jit.sweep);
      const double phase = f0 * t + (f1 - f0) * t * t / (2.0 * spec.duration);
      return amplitude * ramp * std::sin(2.0 * kPi * phase);
    }
    case ManeuverKind::kSlalom: {
      const double f = 0.28 * (1.0 + 0.15 * jit.freq);
      return amplitude * ramp * std::sin(2.0 * kPi * f * t);
    }
    case ManeuverKind::kDoubleLaneChange: {
      // Repeated double-lane-change pattern: two opposed lobes, straight gap.
      const double period = 12.0;
      const double u = std::fmod(t, period);
      return amplitude * (lobe((u - 2.0) / 2.0) - lobe((u - 5.0) / 2.0));
    }
    case ManeuverKind::kStraightBrake:
      return 0.0;
  }
  return 0.0;
}

struct RunResult {
  Trajectory trajectory;
  std::vector<ActuationFrame> actuation;
  std::vector<ControlSample> controls;
  double realized_ay_max = 0.0;
};

RunResult run_once(const ManeuverSpec& spec, const ShapeJitter& jit,
                   double amplitude, const PlantConfig& config,
                   const RoadProfile& road) {
  const auto& p = config.vehicle;
  const int control_steps = static_cast<int>(std::lround(spec.duration / kControlDt));
  const int fine_per_control =
      std::max(1, static_cast<int>(std::lround(kControlDt / config.dt_fine)));
  const double dt_fine = kControlDt / fine_per_control;

  RunResult run;
  run.trajectory.truth.reserve(control_steps + 1);
  run.actuation.reserve(control_steps + 1);
  run.controls.reserve(control_steps + 1);

  PlantState state = plant_rest_state(config, spec.initial_speed);

  // Speed-hold PI on the wheel torques with a slow target modulation so
  // every trajectory carries some longitudinal excitation.
  double integ = 0.0;
  const double kp = 1400.0;
  const double ki = 350.0;

  for (int k = 0; k <= control_steps; ++k) {
    const double t = k * kControlDt;

    PlantInput input;
    input.steer = steering_angle(spec, jit, amplitude, t);
    if (spec.kind == ManeuverKind::kStraightBrake) {
      // Deceleration pulse instead of speed hold; amplitude acts as the
      // target deceleration in m/s^2.
      const bool braking = t >= 0.3 * spec.duration && t <= 0.6 * spec.duration;
      const double decel = braking ? std::min(amplitude, 6.0) : 0.0;
      const double torque = -decel * p.total_mass * p.tire_radius / 4.0;
      input.torque = {torque, torque, torque, torque};
    } else {
      const double v_target = spec.initial_speed +
                              1.2 * std::sin(2.0 * kPi * 0.05 * t + jit.phase);
      const double err = v_target - state.body.vx;
      integ = std::clamp(integ + err * kControlDt, -4.0, 4.0);
      const double force = kp * err + ki * integ;
      const double torque = force * p.tire_radius / 4.0;
      input.torque = {torque, torque, torque, torque};
    }

    const auto outputs = plant_outputs(state, input, road, config);
    GroundTruthFrame frame;
    frame.t = t;
    frame.x = state.body.x;
    frame.y = state.body.y;
    frame.yaw = state.body.yaw;
    frame.vx = state.body.vx;
    frame.vy = state.body.vy;
    frame.yaw_rate = state.body.yaw_rate;
    frame.ax = outputs.accel.ax;
    frame.ay = outputs.accel.ay;
    frame.roll = state.body.roll;
    frame.pitch = state.body.pitch;
    frame.beta = std::atan2(state.body.vy, state.body.vx);
    run.trajectory.truth.push_back(frame);
    run.actuation.push_back(
        ActuationFrame{t, state.body.wheel_speed, input.steer});
    run.controls.push_back(ControlSample{t, input});
    run.realized_ay_max = std::max(run.realized_ay_max, std::abs(frame.ay));

    if (k == control_steps) {
      break;
    }
    for (int i = 0; i < fine_per_control; ++i) {
      state = plant_step(state, input, road, config, dt_fine);
    }
  }
  return run;
}

}  // namespace

const char* maneuver_kind_name(ManeuverKind kind) {
  switch (kind) {
    case ManeuverKind::kStepSteer: return "step_steer";
    case ManeuverKind::kSineSweep: return "sine_sweep";
    case ManeuverKind::kSlalom: return "slalom";
    case ManeuverKind::kDoubleLaneChange: return "double_lane_change";
    case ManeuverKind::kStraightBrake: return "straight_brake";
  }
  return "unknown";
}

ManeuverKind maneuver_kind_from_name(const std::string& name) {
  for (auto kind : {ManeuverKind::kStepSteer, ManeuverKind::kSineSweep,
                    ManeuverKind::kSlalom, ManeuverKind::kDoubleLaneChange,
                    ManeuverKind::kStraightBrake}) {
    if (name == maneuver_kind_name(kind)) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown maneuver kind: " + name);
}

void ManeuverSpec::validate() const {
  if (!(target_ay_max > 0.0 && target_ay_max <= 10.5)) {
    throw std::invalid_argument("maneuver: target_ay_max must be in (0, 10.5]");
  }
  if (duration <= 0.0) {
    throw std::invalid_argument("maneuver: duration must be > 0");
  }
  if (initial_speed < 0.0 || initial_speed > 60.0) {
    throw std::invalid_argument("maneuver: initial_speed must be in [0, 60]");
  }
}

ManeuverResult generate_maneuver(const ManeuverSpec& spec, const PlantConfig& config,
                                 const RoadProfile& road) {
  spec.validate();
  road.validate();
  config.vehicle.validate();

  const auto jit = make_jitter(spec.seed);

  // Kinematic initial guess, then damped multiplicative correction.
  double amplitude = std::clamp(
      spec.target_ay_max * config.vehicle.wheelbase() /
          std::max(spec.initial_speed * spec.initial_speed, 1.0),
      1e-3, kSteerStop);
  if (spec.kind == ManeuverKind::kStraightBrake) {
    amplitude = std::min(spec.target_ay_max, 6.0);
  }

  ManeuverResult result;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    result.iterations = iter;
    RunResult run;
    try {
      run = run_once(spec, jit, amplitude, config, road);
    } catch (const SimulationAbort&) {
      // Too aggressive for the plant envelope; back off and retry.
      amplitude *= 0.5;
      continue;
    }
    result.trajectory = std::move(run.trajectory);
    result.actuation = std::move(run.actuation);
    result.controls = std::move(run.controls);
    result.realized_ay_max = run.realized_ay_max;

    const double err = result.realized_ay_max / spec.target_ay_max;
    if (err > 0.95 && err < 1.05) {
      break;
    }
    if (spec.kind == ManeuverKind::kStraightBrake ||
        result.realized_ay_max < 1e-6) {
      break;  // no lateral response to scale
    }
    const bool at_stop = amplitude >= kSteerStop && err < 1.0;
    if (at_stop) {
      break;  // friction/steering limited
    }
    const double ratio = std::clamp(1.0 / err, 0.25, 4.0);
    amplitude = std::min(amplitude * std::pow(ratio, 0.9), kSteerStop);
  }

  if (result.trajectory.truth.empty()) {
    throw SimulationAbort("maneuver left the plant envelope at every tried amplitude");
  }
  result.target_reached =
      std::abs(result.realized_ay_max - spec.target_ay_max) <=
      0.10 * spec.target_ay_max;
  return result;
}

}  // namespace vmv::plant
