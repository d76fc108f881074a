#include "vmv/dynamics/tire.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vmv/dynamics/states.hpp"

namespace vmv::dynamics {

namespace {

// Backoff from the |tau| = 1 singularity of the Dugoff denominators.
constexpr double kSlipBackoff = 1e-6;

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string("tire params: ") + what);
  }
}

void validate_channel(const PacejkaChannel& ch) {
  require(ch.stiffness_b > 0.0, "pacejka B must be > 0");
  require(ch.shape_c > 0.0 && ch.shape_c <= 3.0, "pacejka C must be in (0, 3]");
  require(ch.peak_d > 0.0, "pacejka D must be > 0");
}

}  // namespace

void validate(const TireParams& params) {
  std::visit(
      [](const auto& tire) {
        using T = std::decay_t<decltype(tire)>;
        if constexpr (std::is_same_v<T, LinearTire>) {
          require(tire.long_stiffness > 0.0 && tire.corner_stiffness > 0.0,
                  "stiffnesses must be > 0");
        } else if constexpr (std::is_same_v<T, DugoffTire>) {
          require(tire.long_stiffness > 0.0 && tire.corner_stiffness > 0.0,
                  "stiffnesses must be > 0");
          require(tire.friction > 0.0 && tire.friction <= 1.5,
                  "friction must be in (0, 1.5]");
        } else {
          validate_channel(tire.longitudinal);
          validate_channel(tire.lateral);
          require(tire.friction > 0.0 && tire.friction <= 1.5,
                  "friction must be in (0, 1.5]");
        }
      },
      params);
}

double magic_formula(double slip, const PacejkaChannel& ch, double peak) {
  const double xs = slip + ch.shift_h;
  const double bx = ch.stiffness_b * xs;
  const double arg = bx - ch.curvature_e * (bx - std::atan(bx));
  return peak * std::sin(ch.shape_c * std::atan(arg)) + ch.shift_v;
}

double pacejka_force(double slip, const PacejkaChannel& ch, double friction, double fz) {
  const double peak =
      ch.load_scaled ? ch.peak_d * friction * std::max(fz, 0.0) : ch.peak_d;
  return magic_formula(slip, ch, peak);
}

ForcePair tire_force_linear(double slip_ratio, double slip_angle,
                            const LinearTire& tire) {
  return {tire.long_stiffness * slip_ratio, tire.corner_stiffness * slip_angle};
}

ForcePair tire_force_dugoff(double slip_ratio, double slip_angle, double fz,
                            const DugoffTire& tire) {
  if (fz < 0.0) {
    throw std::domain_error("dugoff: negative normal load (load-transfer fault)");
  }
  const double tau = std::clamp(slip_ratio, -1.0 + kSlipBackoff, 1.0 - kSlipBackoff);
  const double tan_alpha = std::tan(slip_angle);
  const double fx_lin = tire.long_stiffness * tau;
  const double fy_lin = tire.corner_stiffness * tan_alpha;
  const double demand = std::hypot(fx_lin, fy_lin);
  if (demand < 1e-12 || fz == 0.0) {
    return {0.0, 0.0};
  }
  const double lambda = tire.friction * fz * (1.0 + tau) / (2.0 * demand);
  const double f_scale = lambda < 1.0 ? (2.0 - lambda) * lambda : 1.0;
  const double q = f_scale / (1.0 + tau);
  return {fx_lin * q, fy_lin * q};
}

ForcePair tire_force_pacejka(double slip_ratio, double slip_angle, double fz,
                             const PacejkaTire& tire) {
  return {pacejka_force(slip_ratio, tire.longitudinal, tire.friction, fz),
          pacejka_force(slip_angle, tire.lateral, tire.friction, fz)};
}

ForcePair tire_forces(double slip_ratio, double slip_angle, double fz,
                      const TireParams& params) {
  return std::visit(
      [&](const auto& tire) -> ForcePair {
        using T = std::decay_t<decltype(tire)>;
        if constexpr (std::is_same_v<T, LinearTire>) {
          return tire_force_linear(slip_ratio, slip_angle, tire);
        } else if constexpr (std::is_same_v<T, DugoffTire>) {
          return tire_force_dugoff(slip_ratio, slip_angle, fz, tire);
        } else {
          return tire_force_pacejka(slip_ratio, slip_angle, fz, tire);
        }
      },
      params);
}

ForcePair tire_to_body(double fxp, double fyp, double fz, double steer,
                       double roll, double pitch) {
  const double planar_x = fxp * std::cos(steer) - fyp * std::sin(steer);
  const double planar_y = fyp * std::cos(steer) + fxp * std::sin(steer);
  const double fx = planar_x * std::cos(pitch) - fz * std::sin(pitch);
  const double fy = planar_x * std::sin(roll) * std::sin(pitch) +
                    planar_y * std::cos(roll) + fz * std::sin(roll) * std::cos(pitch);
  return {fx, fy};
}

WheelLoads vertical_forces(double ax, double ay, const VehicleParams& p) {
  const double wb = p.wheelbase();
  const double front_axle =
      p.total_mass * (p.dist_rear / wb * p.gravity - p.cog_height / wb * ax);
  const double rear_axle =
      p.total_mass * (p.dist_front / wb * p.gravity + p.cog_height / wb * ax);

  // Lateral split: + for the loaded (outer) side, - for the unloaded one.
  // A zero track collapses both factors to 1/2 (lumped-axle support).
  const double track = p.track();
  const double shift =
      track > 0.0 ? p.cog_height / (track * p.gravity) * ay : 0.0;
  const double left = 0.5 - shift;
  const double right = 0.5 + shift;

  WheelLoads loads;
  loads.fz = {front_axle * left, front_axle * right, rear_axle * left,
              rear_axle * right};
  for (double& fz : loads.fz) {
    if (fz < 0.0) {
      fz = 0.0;
      loads.wheel_lift = true;
    }
  }
  return loads;
}

}  // namespace vmv::dynamics
