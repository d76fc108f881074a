#include "vmv/plant/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vmv/dynamics/slip.hpp"
#include "vmv/errors.hpp"

namespace vmv::plant {

using dynamics::kFl;
using dynamics::kFr;
using dynamics::kRl;
using dynamics::kRr;

namespace {

constexpr double kAttitudeLimit = 0.3;  // [rad] simulation abort envelope

struct Derivatives {
  dynamics::FourWheelState body;  // holds d/dt of each body entry
  double vz = 0.0;
  std::array<double, 4> susp{};
};

struct CornerGeometry {
  std::array<double, 4> x;      // longitudinal position of each corner
  std::array<double, 4> y;      // lateral position (left positive)
  std::array<double, 4> share;  // static load fraction per corner
};

CornerGeometry corner_geometry(const dynamics::VehicleParams& p) {
  CornerGeometry g;
  g.x = {p.dist_front, p.dist_front, -p.dist_rear, -p.dist_rear};
  g.y = {p.half_track_left, -p.half_track_right, p.half_track_left,
         -p.half_track_right};
  const double wb = p.wheelbase();
  const double track = p.track();
  const double front = p.dist_rear / wb;
  const double rear = p.dist_front / wb;
  const double left = track > 0.0 ? p.half_track_right / track : 0.5;
  const double right = track > 0.0 ? p.half_track_left / track : 0.5;
  g.share = {front * left, front * right, rear * left, rear * right};
  return g;
}

double aero_force(double vx, const RoadProfile& road,
                  const dynamics::VehicleParams& p) {
  const double v = vx + road.wind_speed;
  return 0.5 * p.air_density * p.drag_coeff * p.frontal_area * v * std::abs(v);
}

struct Evaluation {
  Derivatives deriv;
  PlantOutputs out;
};

Evaluation evaluate(const PlantState& s, const PlantInput& in,
                    const RoadProfile& road, const PlantConfig& cfg) {
  const auto& p = cfg.vehicle;
  const auto& body = s.body;
  const auto geom = corner_geometry(p);

  const double f_aero = aero_force(body.vx, road, p);

  Evaluation ev;

  // Suspension kinematics: corner vertical rates from heave, roll, pitch.
  std::array<double, 4> susp_rate{};
  std::array<double, 4> f_susp{};  // full suspension force on the body, up+
  for (int i = 0; i < 4; ++i) {
    susp_rate[i] =
        s.vz + body.roll_rate * geom.y[i] - body.pitch_rate * geom.x[i];
    const double dynamic = -cfg.suspension.spring_rate * s.susp[i] -
                           cfg.suspension.damping * susp_rate[i];
    f_susp[i] = p.suspended_mass * p.gravity * geom.share[i] + dynamic;
    ev.out.fz[i] = p.total_mass * p.gravity * geom.share[i] + dynamic;
    if (ev.out.fz[i] < 0.0) {
      ev.out.fz[i] = 0.0;
      ev.out.wheel_lift = true;
    }
  }

  const auto alphas = dynamics::wheel_slip_angles(body.vx, body.vy,
                                                  body.yaw_rate, in.steer, p);

  double sum_fx = 0.0;
  double sum_fy = 0.0;
  std::array<double, 4> body_fx{};
  std::array<double, 4> body_fy{};
  for (int i = 0; i < 4; ++i) {
    const bool front = i == kFl || i == kFr;
    const double steer = front ? in.steer : 0.0;
    const double vwx = body.vx + body.yaw_rate * -geom.y[i];
    const double vwy = body.vy + body.yaw_rate * geom.x[i];
    const double vxp = vwx * std::cos(steer) + vwy * std::sin(steer);

    const double tau =
        dynamics::slip_ratio(body.wheel_speed[i], vxp, p.tire_radius);
    const auto tf =
        dynamics::tire_force_pacejka(tau, alphas[i], ev.out.fz[i], cfg.tire);
    ev.out.fxp[i] = tf.fx;
    const auto vf = dynamics::tire_to_body(tf.fx, tf.fy, ev.out.fz[i], steer,
                                           body.roll, body.pitch);
    body_fx[i] = vf.fx;
    body_fy[i] = vf.fy;
    sum_fx += vf.fx;
    sum_fy += vf.fy;
  }

  const double cos_pitch_slope = std::cos(body.pitch - road.slope);

  // Translational dynamics with slope/bank gravity terms.
  const double dvx = body.yaw_rate * body.vy + sum_fx / p.total_mass +
                     p.gravity * std::sin(body.pitch - road.slope) -
                     f_aero * std::cos(body.pitch) / p.total_mass;
  const double dvy = -body.yaw_rate * body.vx + sum_fy / p.total_mass -
                     p.gravity * std::sin(body.roll - road.bank) * cos_pitch_slope;
  const double sum_susp = f_susp[0] + f_susp[1] + f_susp[2] + f_susp[3];
  const double dvz = body.pitch_rate * body.vx + sum_susp / p.suspended_mass -
                     p.gravity * std::cos(body.roll - road.bank) * cos_pitch_slope +
                     f_aero * std::sin(body.pitch) / p.suspended_mass;

  // Attitude dynamics driven by suspension forces.
  const double roll_acc =
      (-(f_susp[kFr] + f_susp[kRr]) * p.half_track_right +
       (f_susp[kFl] + f_susp[kRl]) * p.half_track_left + sum_fy * p.cog_height) /
      p.inertia_roll;
  const double pitch_acc =
      (-(f_susp[kFl] + f_susp[kFr]) * p.dist_front +
       (f_susp[kRl] + f_susp[kRr]) * p.dist_rear - sum_fx * p.cog_height +
       (p.aero_height - p.cog_height) * f_aero) /
      p.inertia_pitch;
  const double yaw_acc =
      ((body_fy[kFl] + body_fy[kFr]) * p.dist_front -
       (body_fy[kRl] + body_fy[kRr]) * p.dist_rear +
       (body_fx[kFr] + body_fx[kRr]) * p.half_track_right -
       (body_fx[kFl] + body_fx[kRl]) * p.half_track_left) /
      p.inertia_yaw;

  ev.deriv.body.x = body.vx * std::cos(body.yaw) - body.vy * std::sin(body.yaw);
  ev.deriv.body.y = body.vx * std::sin(body.yaw) + body.vy * std::cos(body.yaw);
  ev.deriv.body.vx = dvx;
  ev.deriv.body.vy = dvy;
  ev.deriv.body.yaw = body.yaw_rate;
  ev.deriv.body.yaw_rate = yaw_acc;
  ev.deriv.body.roll = body.roll_rate;
  ev.deriv.body.roll_rate = roll_acc;
  ev.deriv.body.pitch = body.pitch_rate;
  ev.deriv.body.pitch_rate = pitch_acc;
  ev.deriv.vz = dvz;
  ev.deriv.susp = susp_rate;
  for (int i = 0; i < 4; ++i) {
    ev.deriv.body.wheel_speed[i] =
        (in.torque[i] - p.tire_radius * ev.out.fxp[i]) / p.wheel_inertia;
  }

  ev.out.accel.ax = dvx - body.yaw_rate * body.vy;
  ev.out.accel.ay = dvy + body.yaw_rate * body.vx;
  return ev;
}

PlantState advance(const PlantState& s, const Derivatives& d, double h) {
  PlantState n = s;
  n.body.x += h * d.body.x;
  n.body.y += h * d.body.y;
  n.body.vx += h * d.body.vx;
  n.body.vy += h * d.body.vy;
  n.body.yaw += h * d.body.yaw;
  n.body.yaw_rate += h * d.body.yaw_rate;
  n.body.roll += h * d.body.roll;
  n.body.roll_rate += h * d.body.roll_rate;
  n.body.pitch += h * d.body.pitch;
  n.body.pitch_rate += h * d.body.pitch_rate;
  n.vz += h * d.vz;
  for (int i = 0; i < 4; ++i) {
    n.body.wheel_speed[i] += h * d.body.wheel_speed[i];
    n.susp[i] += h * d.susp[i];
  }
  return n;
}

Derivatives combine(const Derivatives& k1, const Derivatives& k2,
                    const Derivatives& k3, const Derivatives& k4) {
  auto mix = [](double a, double b, double c, double d) {
    return (a + 2.0 * b + 2.0 * c + d) / 6.0;
  };
  Derivatives r;
  r.body.x = mix(k1.body.x, k2.body.x, k3.body.x, k4.body.x);
  r.body.y = mix(k1.body.y, k2.body.y, k3.body.y, k4.body.y);
  r.body.vx = mix(k1.body.vx, k2.body.vx, k3.body.vx, k4.body.vx);
  r.body.vy = mix(k1.body.vy, k2.body.vy, k3.body.vy, k4.body.vy);
  r.body.yaw = mix(k1.body.yaw, k2.body.yaw, k3.body.yaw, k4.body.yaw);
  r.body.yaw_rate =
      mix(k1.body.yaw_rate, k2.body.yaw_rate, k3.body.yaw_rate, k4.body.yaw_rate);
  r.body.roll = mix(k1.body.roll, k2.body.roll, k3.body.roll, k4.body.roll);
  r.body.roll_rate = mix(k1.body.roll_rate, k2.body.roll_rate, k3.body.roll_rate,
                         k4.body.roll_rate);
  r.body.pitch = mix(k1.body.pitch, k2.body.pitch, k3.body.pitch, k4.body.pitch);
  r.body.pitch_rate = mix(k1.body.pitch_rate, k2.body.pitch_rate,
                          k3.body.pitch_rate, k4.body.pitch_rate);
  r.vz = mix(k1.vz, k2.vz, k3.vz, k4.vz);
  for (int i = 0; i < 4; ++i) {
    r.body.wheel_speed[i] = mix(k1.body.wheel_speed[i], k2.body.wheel_speed[i],
                                k3.body.wheel_speed[i], k4.body.wheel_speed[i]);
    r.susp[i] = mix(k1.susp[i], k2.susp[i], k3.susp[i], k4.susp[i]);
  }
  return r;
}

bool finite(const PlantState& s) {
  const auto& b = s.body;
  bool ok = std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.vx) &&
            std::isfinite(b.vy) && std::isfinite(b.yaw) &&
            std::isfinite(b.yaw_rate) && std::isfinite(b.roll) &&
            std::isfinite(b.pitch) && std::isfinite(s.vz);
  for (int i = 0; i < 4; ++i) {
    ok = ok && std::isfinite(b.wheel_speed[i]) && std::isfinite(s.susp[i]);
  }
  return ok;
}

void check_envelope(const PlantState& s) {
  if (!finite(s)) {
    throw SimulationAbort("plant state became non-finite");
  }
  if (std::abs(s.body.vx) > 100.0) {
    throw SimulationAbort("plant speed envelope exceeded: vx=" +
                          std::to_string(s.body.vx));
  }
  if (std::abs(s.body.roll) > kAttitudeLimit ||
      std::abs(s.body.pitch) > kAttitudeLimit) {
    throw SimulationAbort("plant attitude envelope exceeded: roll=" +
                          std::to_string(s.body.roll) +
                          " pitch=" + std::to_string(s.body.pitch));
  }
}

}  // namespace

void RoadProfile::validate() const {
  if (std::abs(slope) > 0.15 || std::abs(bank) > 0.15) {
    throw std::invalid_argument("road: |slope| and |bank| must be <= 0.15 rad");
  }
  if (friction <= 0.0 || friction > 1.5) {
    throw std::invalid_argument("road: friction must be in (0, 1.5]");
  }
}

PlantOutputs plant_outputs(const PlantState& state, const PlantInput& input,
                           const RoadProfile& road, const PlantConfig& config) {
  return evaluate(state, input, road, config).out;
}

PlantState plant_step(const PlantState& state, const PlantInput& input,
                      const RoadProfile& road, const PlantConfig& config,
                      double dt) {
  if (dt <= 0.0) {
    throw std::invalid_argument("plant_step: dt must be > 0");
  }
  const auto k1 = evaluate(state, input, road, config).deriv;
  const auto k2 = evaluate(advance(state, k1, 0.5 * dt), input, road, config).deriv;
  const auto k3 = evaluate(advance(state, k2, 0.5 * dt), input, road, config).deriv;
  const auto k4 = evaluate(advance(state, k3, dt), input, road, config).deriv;
  PlantState next = advance(state, combine(k1, k2, k3, k4), dt);
  check_envelope(next);
  return next;
}

PlantState plant_rest_state(const PlantConfig& config, double speed) {
  PlantState s;
  s.body.vx = speed;
  const double omega = speed / config.vehicle.tire_radius;
  s.body.wheel_speed = {omega, omega, omega, omega};
  return s;
}

}  // namespace vmv::plant
