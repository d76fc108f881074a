#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vmv/dynamics/bicycle.hpp"
#include "vmv/dynamics/four_wheel.hpp"
#include "vmv/dynamics/slip.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"
#include "vmv/estimation/observer.hpp"
#include "vmv/harness/config.hpp"
#include "vmv/plant/maneuver.hpp"
#include "vmv/plant/plant.hpp"
#include "vmv/plant/sensors.hpp"
#include "vmv/plant/trajectory.hpp"
#include "vmv/validity/compare.hpp"
#include "vmv/validity/model.hpp"
#include "vmv/validity/report.hpp"

namespace py = pybind11;
using namespace vmv;

namespace {

// High-level convenience: simulate one maneuver on the default plant and
// return a complete trajectory (truth + noisy sensors).
plant::Trajectory simulate_maneuver(const plant::ManeuverSpec& spec,
                                    double road_friction, double noise_scale) {
  auto config = harness::default_config();
  config.road.friction = road_friction;
  auto plant_config = config.plant_config();
  auto result = plant::generate_maneuver(spec, plant_config, config.road);
  plant::NoiseSigmas noise = config.noise;
  noise.accel *= noise_scale;
  noise.yaw_rate *= noise_scale;
  noise.wheel_speed *= noise_scale;
  noise.steer *= noise_scale;
  result.trajectory.name = "maneuver";
  result.trajectory.sensors = plant::sample_sensors(
      result.trajectory.truth, result.actuation, noise, spec.seed ^ 0x5a5aull);
  return result.trajectory;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Vehicle model validity toolkit: tire and vehicle models, a "
            "synthetic ground-truth plant, one-step validity analysis and "
            "model-based EKF observers.";

  // ---- dynamics ----
  py::class_<dynamics::VehicleParams>(m, "VehicleParams")
      .def(py::init<>())
      .def_readwrite("total_mass", &dynamics::VehicleParams::total_mass)
      .def_readwrite("suspended_mass", &dynamics::VehicleParams::suspended_mass)
      .def_readwrite("inertia_roll", &dynamics::VehicleParams::inertia_roll)
      .def_readwrite("inertia_pitch", &dynamics::VehicleParams::inertia_pitch)
      .def_readwrite("inertia_yaw", &dynamics::VehicleParams::inertia_yaw)
      .def_readwrite("dist_front", &dynamics::VehicleParams::dist_front)
      .def_readwrite("dist_rear", &dynamics::VehicleParams::dist_rear)
      .def_readwrite("half_track_left", &dynamics::VehicleParams::half_track_left)
      .def_readwrite("half_track_right", &dynamics::VehicleParams::half_track_right)
      .def_readwrite("cog_height", &dynamics::VehicleParams::cog_height)
      .def_readwrite("aero_height", &dynamics::VehicleParams::aero_height)
      .def_readwrite("tire_radius", &dynamics::VehicleParams::tire_radius)
      .def_readwrite("wheel_inertia", &dynamics::VehicleParams::wheel_inertia)
      .def_readwrite("air_density", &dynamics::VehicleParams::air_density)
      .def_readwrite("drag_coeff", &dynamics::VehicleParams::drag_coeff)
      .def_readwrite("frontal_area", &dynamics::VehicleParams::frontal_area)
      .def_readwrite("gravity", &dynamics::VehicleParams::gravity)
      .def("wheelbase", &dynamics::VehicleParams::wheelbase)
      .def("track", &dynamics::VehicleParams::track)
      .def("validate", &dynamics::VehicleParams::validate);
  m.def("vehicle_preset", &dynamics::vehicle_preset, py::arg("name"));

  py::class_<dynamics::LinearTire>(m, "LinearTire")
      .def(py::init<double, double>(), py::arg("long_stiffness") = 170000.0,
           py::arg("corner_stiffness") = 160000.0)
      .def_readwrite("long_stiffness", &dynamics::LinearTire::long_stiffness)
      .def_readwrite("corner_stiffness", &dynamics::LinearTire::corner_stiffness);

  py::class_<dynamics::DugoffTire>(m, "DugoffTire")
      .def(py::init<double, double, double>(), py::arg("long_stiffness") = 170000.0,
           py::arg("corner_stiffness") = 160000.0, py::arg("friction") = 1.1)
      .def_readwrite("long_stiffness", &dynamics::DugoffTire::long_stiffness)
      .def_readwrite("corner_stiffness", &dynamics::DugoffTire::corner_stiffness)
      .def_readwrite("friction", &dynamics::DugoffTire::friction);

  py::class_<dynamics::PacejkaChannel>(m, "PacejkaChannel")
      .def(py::init<>())
      .def_readwrite("stiffness_b", &dynamics::PacejkaChannel::stiffness_b)
      .def_readwrite("shape_c", &dynamics::PacejkaChannel::shape_c)
      .def_readwrite("peak_d", &dynamics::PacejkaChannel::peak_d)
      .def_readwrite("curvature_e", &dynamics::PacejkaChannel::curvature_e)
      .def_readwrite("shift_h", &dynamics::PacejkaChannel::shift_h)
      .def_readwrite("shift_v", &dynamics::PacejkaChannel::shift_v)
      .def_readwrite("load_scaled", &dynamics::PacejkaChannel::load_scaled);

  py::class_<dynamics::PacejkaTire>(m, "PacejkaTire")
      .def(py::init<>())
      .def_readwrite("longitudinal", &dynamics::PacejkaTire::longitudinal)
      .def_readwrite("lateral", &dynamics::PacejkaTire::lateral)
      .def_readwrite("friction", &dynamics::PacejkaTire::friction);

  py::class_<dynamics::ForcePair>(m, "ForcePair")
      .def_readonly("fx", &dynamics::ForcePair::fx)
      .def_readonly("fy", &dynamics::ForcePair::fy);

  py::class_<dynamics::WheelLoads>(m, "WheelLoads")
      .def_readonly("fz", &dynamics::WheelLoads::fz)
      .def_readonly("wheel_lift", &dynamics::WheelLoads::wheel_lift)
      .def("front_axle", &dynamics::WheelLoads::front_axle)
      .def("rear_axle", &dynamics::WheelLoads::rear_axle);

  m.def("slip_ratio", &dynamics::slip_ratio, py::arg("wheel_omega"),
        py::arg("v_wheel_long"), py::arg("tire_radius"));
  m.def("magic_formula", &dynamics::magic_formula, py::arg("slip"),
        py::arg("channel"), py::arg("peak"));
  m.def("pacejka_force", &dynamics::pacejka_force, py::arg("slip"),
        py::arg("channel"), py::arg("friction"), py::arg("fz"));
  m.def("tire_force_linear", &dynamics::tire_force_linear, py::arg("slip_ratio"),
        py::arg("slip_angle"), py::arg("tire"));
  m.def("tire_force_dugoff", &dynamics::tire_force_dugoff, py::arg("slip_ratio"),
        py::arg("slip_angle"), py::arg("fz"), py::arg("tire"));
  m.def("tire_force_pacejka", &dynamics::tire_force_pacejka, py::arg("slip_ratio"),
        py::arg("slip_angle"), py::arg("fz"), py::arg("tire"));
  m.def("tire_to_body", &dynamics::tire_to_body, py::arg("fxp"), py::arg("fyp"),
        py::arg("fz"), py::arg("steer"), py::arg("roll"), py::arg("pitch"));
  m.def("vertical_forces", &dynamics::vertical_forces, py::arg("ax"), py::arg("ay"),
        py::arg("params"));

  py::class_<dynamics::ControlInput>(m, "ControlInput")
      .def(py::init<>())
      .def_readwrite("steer", &dynamics::ControlInput::steer)
      .def_readwrite("wheel_speed", &dynamics::ControlInput::wheel_speed);

  py::class_<dynamics::Accel>(m, "Accel")
      .def(py::init<double, double>(), py::arg("ax") = 0.0, py::arg("ay") = 0.0)
      .def_readwrite("ax", &dynamics::Accel::ax)
      .def_readwrite("ay", &dynamics::Accel::ay);

  py::class_<dynamics::BicycleState>(m, "BicycleState")
      .def(py::init<>())
      .def_readwrite("x", &dynamics::BicycleState::x)
      .def_readwrite("y", &dynamics::BicycleState::y)
      .def_readwrite("vx", &dynamics::BicycleState::vx)
      .def_readwrite("vy", &dynamics::BicycleState::vy)
      .def_readwrite("yaw", &dynamics::BicycleState::yaw)
      .def_readwrite("yaw_rate", &dynamics::BicycleState::yaw_rate);

  py::class_<dynamics::BicycleStep>(m, "BicycleStep")
      .def_readonly("state", &dynamics::BicycleStep::state)
      .def_readonly("accel", &dynamics::BicycleStep::accel);

  m.def("step_bicycle", &dynamics::step_bicycle, py::arg("state"), py::arg("input"),
        py::arg("dt"), py::arg("tire"), py::arg("params"),
        py::arg("load_accel") = dynamics::Accel{});

  py::class_<dynamics::FourWheelState>(m, "FourWheelState")
      .def(py::init<>())
      .def_readwrite("x", &dynamics::FourWheelState::x)
      .def_readwrite("vx", &dynamics::FourWheelState::vx)
      .def_readwrite("y", &dynamics::FourWheelState::y)
      .def_readwrite("vy", &dynamics::FourWheelState::vy)
      .def_readwrite("yaw", &dynamics::FourWheelState::yaw)
      .def_readwrite("yaw_rate", &dynamics::FourWheelState::yaw_rate)
      .def_readwrite("wheel_speed", &dynamics::FourWheelState::wheel_speed);

  py::class_<dynamics::FourWheelStep>(m, "FourWheelStep")
      .def_readonly("state", &dynamics::FourWheelStep::state)
      .def_readonly("accel", &dynamics::FourWheelStep::accel);

  m.def("step_four_wheel", &dynamics::step_four_wheel, py::arg("state"),
        py::arg("input"), py::arg("dt"), py::arg("tire"), py::arg("params"),
        py::arg("load_accel") = dynamics::Accel{});

  // ---- plant / trajectories ----
  py::class_<plant::GroundTruthFrame>(m, "GroundTruthFrame")
      .def(py::init<>())
      .def_readwrite("t", &plant::GroundTruthFrame::t)
      .def_readwrite("x", &plant::GroundTruthFrame::x)
      .def_readwrite("y", &plant::GroundTruthFrame::y)
      .def_readwrite("yaw", &plant::GroundTruthFrame::yaw)
      .def_readwrite("vx", &plant::GroundTruthFrame::vx)
      .def_readwrite("vy", &plant::GroundTruthFrame::vy)
      .def_readwrite("yaw_rate", &plant::GroundTruthFrame::yaw_rate)
      .def_readwrite("ax", &plant::GroundTruthFrame::ax)
      .def_readwrite("ay", &plant::GroundTruthFrame::ay)
      .def_readwrite("roll", &plant::GroundTruthFrame::roll)
      .def_readwrite("pitch", &plant::GroundTruthFrame::pitch)
      .def_readwrite("beta", &plant::GroundTruthFrame::beta);

  py::class_<plant::SensorFrame>(m, "SensorFrame")
      .def(py::init<>())
      .def_readwrite("t", &plant::SensorFrame::t)
      .def_readwrite("ax", &plant::SensorFrame::ax)
      .def_readwrite("ay", &plant::SensorFrame::ay)
      .def_readwrite("yaw_rate", &plant::SensorFrame::yaw_rate)
      .def_readwrite("wheel_speed", &plant::SensorFrame::wheel_speed)
      .def_readwrite("steer", &plant::SensorFrame::steer);

  py::class_<plant::Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("name", &plant::Trajectory::name)
      .def_readwrite("truth", &plant::Trajectory::truth)
      .def_readwrite("sensors", &plant::Trajectory::sensors)
      .def("truth_dt", &plant::Trajectory::truth_dt)
      .def("ay_max", &plant::Trajectory::ay_max);

  m.def("write_trajectory", &plant::write_trajectory, py::arg("dir"),
        py::arg("trajectory"), py::arg("meta_json") = std::string("{}"));
  m.def("read_trajectory", &plant::read_trajectory, py::arg("dir"));

  py::enum_<plant::ManeuverKind>(m, "ManeuverKind")
      .value("STEP_STEER", plant::ManeuverKind::kStepSteer)
      .value("SINE_SWEEP", plant::ManeuverKind::kSineSweep)
      .value("SLALOM", plant::ManeuverKind::kSlalom)
      .value("DOUBLE_LANE_CHANGE", plant::ManeuverKind::kDoubleLaneChange)
      .value("STRAIGHT_BRAKE", plant::ManeuverKind::kStraightBrake);

  py::class_<plant::ManeuverSpec>(m, "ManeuverSpec")
      .def(py::init<>())
      .def_readwrite("kind", &plant::ManeuverSpec::kind)
      .def_readwrite("target_ay_max", &plant::ManeuverSpec::target_ay_max)
      .def_readwrite("initial_speed", &plant::ManeuverSpec::initial_speed)
      .def_readwrite("duration", &plant::ManeuverSpec::duration)
      .def_readwrite("seed", &plant::ManeuverSpec::seed);

  m.def("simulate_maneuver", &simulate_maneuver, py::arg("spec"),
        py::arg("road_friction") = 1.1, py::arg("noise_scale") = 1.0,
        "Simulate one maneuver on the default plant; returns truth at 100 Hz "
        "plus noisy 50 Hz sensors (noise_scale = 0 for noiseless).");

  // ---- validity ----
  py::enum_<validity::ModelId>(m, "ModelId")
      .value("DBM_LINEAR", validity::ModelId::kDbmLinear)
      .value("DBM_DUGOFF", validity::ModelId::kDbmDugoff)
      .value("DBM_PACEJKA", validity::ModelId::kDbmPacejka)
      .value("FWM_PACEJKA", validity::ModelId::kFwmPacejka);

  py::class_<validity::TireSet>(m, "TireSet")
      .def(py::init<>())
      .def_readwrite("linear", &validity::TireSet::linear)
      .def_readwrite("dugoff", &validity::TireSet::dugoff)
      .def_readwrite("pacejka", &validity::TireSet::pacejka);

  m.def("tire_for_model", &validity::tire_for_model, py::arg("model"),
        py::arg("tires"));

  py::class_<validity::StateVec3>(m, "StateVec3")
      .def(py::init<double, double, double>(), py::arg("vx") = 0.0,
           py::arg("vy") = 0.0, py::arg("yaw_rate") = 0.0)
      .def_readwrite("vx", &validity::StateVec3::vx)
      .def_readwrite("vy", &validity::StateVec3::vy)
      .def_readwrite("yaw_rate", &validity::StateVec3::yaw_rate);

  py::class_<validity::ModelStep>(m, "ModelStep")
      .def_readonly("state", &validity::ModelStep::state)
      .def_readonly("accel", &validity::ModelStep::accel);

  m.def("model_step", &validity::model_step, py::arg("model"), py::arg("state"),
        py::arg("input"), py::arg("dt"), py::arg("tire"), py::arg("params"),
        py::arg("load_accel") = dynamics::Accel{});
  m.def("model_measurement", &validity::model_measurement, py::arg("model"),
        py::arg("state"), py::arg("input"), py::arg("tire"), py::arg("params"),
        py::arg("load_accel") = dynamics::Accel{});
  m.def("rollout_model", &validity::rollout_model, py::arg("model"),
        py::arg("tire"), py::arg("params"), py::arg("init"), py::arg("inputs"),
        py::arg("dt") = 0.02);

  py::class_<validity::StepError>(m, "StepError")
      .def_readonly("t", &validity::StepError::t)
      .def_readonly("e_vx", &validity::StepError::e_vx)
      .def_readonly("e_vy", &validity::StepError::e_vy)
      .def_readonly("e_yaw_rate", &validity::StepError::e_yaw_rate)
      .def_readonly("ay_truth", &validity::StepError::ay_truth);

  m.def("compare_trajectory", &validity::compare_trajectory, py::arg("trajectory"),
        py::arg("model"), py::arg("tire"), py::arg("params"));

  // ---- estimation ----
  py::class_<estimation::NoiseConfig>(m, "NoiseConfig")
      .def(py::init<>())
      .def_property(
          "process",
          [](const estimation::NoiseConfig& n) {
            return std::array<double, 3>{n.process[0], n.process[1], n.process[2]};
          },
          [](estimation::NoiseConfig& n, const std::array<double, 3>& v) {
            n.process = estimation::Vec3(v[0], v[1], v[2]);
          })
      .def_property(
          "measurement",
          [](const estimation::NoiseConfig& n) {
            return std::array<double, 3>{n.measurement[0], n.measurement[1],
                                         n.measurement[2]};
          },
          [](estimation::NoiseConfig& n, const std::array<double, 3>& v) {
            n.measurement = estimation::Vec3(v[0], v[1], v[2]);
          });

  m.def("covariance_from_errors", &estimation::covariance_from_errors,
        py::arg("trajectory"), py::arg("model"), py::arg("tire"), py::arg("params"));

  py::class_<estimation::ObserverEstimate>(m, "ObserverEstimate")
      .def_readonly("t", &estimation::ObserverEstimate::t)
      .def_readonly("vx", &estimation::ObserverEstimate::vx)
      .def_readonly("vy", &estimation::ObserverEstimate::vy)
      .def_readonly("yaw_rate", &estimation::ObserverEstimate::yaw_rate)
      .def_readonly("e_vx", &estimation::ObserverEstimate::e_vx)
      .def_readonly("e_vy", &estimation::ObserverEstimate::e_vy)
      .def_readonly("e_yaw_rate", &estimation::ObserverEstimate::e_yaw_rate);

  py::class_<estimation::ObserverRun>(m, "ObserverRun")
      .def_readonly("estimates", &estimation::ObserverRun::estimates)
      .def_readonly("mae_vx", &estimation::ObserverRun::mae_vx)
      .def_readonly("mae_vy", &estimation::ObserverRun::mae_vy)
      .def_readonly("mae_yaw_rate", &estimation::ObserverRun::mae_yaw_rate)
      .def_readonly("mean_nis", &estimation::ObserverRun::mean_nis)
      .def_readonly("min_cov_eigenvalue",
                    &estimation::ObserverRun::min_cov_eigenvalue);

  m.def("run_observer", &estimation::run_observer, py::arg("trajectory"),
        py::arg("model"), py::arg("tire"), py::arg("params"), py::arg("noise"));

  m.def("default_tires", [] { return harness::default_config().tires; },
        "Tire parameter sets of the standard experiment.");
  m.def("default_vehicle", [] { return harness::default_config().vehicle; },
        "Vehicle parameters of the standard experiment.");

  m.attr("__version__") = "0.1.0";
}
