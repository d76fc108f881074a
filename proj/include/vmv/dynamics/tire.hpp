#pragma once

#include <array>
#include <utility>
#include <variant>

#include "vmv/dynamics/vehicle_params.hpp"

namespace vmv::dynamics {

/// Linear tire: forces proportional to slip, no saturation.
struct LinearTire {
  double long_stiffness = 170000.0;    // C_tau [N per unit slip]
  double corner_stiffness = 160000.0;  // C_alpha [N/rad]
};

/// Dugoff tire: friction-limited analytical model with combined slip.
struct DugoffTire {
  double long_stiffness = 170000.0;
  double corner_stiffness = 160000.0;
  double friction = 1.1;  // mu [-]
};

/// One magic-formula channel (longitudinal or lateral).
struct PacejkaChannel {
  double stiffness_b = 10.0;
  double shape_c = 1.9;
  double peak_d = 1.0;
  double curvature_e = 0.97;
  double shift_h = 0.0;
  double shift_v = 0.0;
  /// When set, the effective peak is peak_d * mu * Fz; otherwise peak_d is
  /// an absolute force in newtons.
  bool load_scaled = true;
};

struct PacejkaTire {
  PacejkaChannel longitudinal{12.0, 1.65, 1.0, 0.9};
  PacejkaChannel lateral{10.0, 1.9, 1.0, 0.97};
  double friction = 1.1;
};

using TireParams = std::variant<LinearTire, DugoffTire, PacejkaTire>;

/// Throws std::invalid_argument when stiffnesses, friction or shape
/// parameters leave their admissible ranges.
void validate(const TireParams& params);

/// Forces in the tire frame, plus the vehicle-frame projection and the
/// normal load they were evaluated at.
struct TireForce {
  double fxp = 0.0;
  double fyp = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
};

/// Tire-frame force pair (longitudinal, lateral).
struct ForcePair {
  double fx = 0.0;
  double fy = 0.0;
};

/// Raw magic formula: y = D sin(C atan(B xs - E (B xs - atan(B xs)))) + Sv
/// with xs = x + Sh and D the already-resolved peak force.
double magic_formula(double slip, const PacejkaChannel& ch, double peak);

/// One Pacejka channel with the peak resolved (load scaled or absolute).
double pacejka_force(double slip, const PacejkaChannel& ch, double friction, double fz);

ForcePair tire_force_linear(double slip_ratio, double slip_angle, const LinearTire& tire);

/// Dugoff combined-slip forces. Throws std::domain_error when fz < 0
/// (signals an upstream load-transfer fault).
ForcePair tire_force_dugoff(double slip_ratio, double slip_angle, double fz,
                            const DugoffTire& tire);

ForcePair tire_force_pacejka(double slip_ratio, double slip_angle, double fz,
                             const PacejkaTire& tire);

/// Dispatch over the tire variant.
ForcePair tire_forces(double slip_ratio, double slip_angle, double fz,
                      const TireParams& params);

/// Tire-frame to vehicle-frame rotation. Candidate models call this with
/// roll = pitch = 0; the plant passes its live angles.
ForcePair tire_to_body(double fxp, double fyp, double fz, double steer,
                       double roll, double pitch);

/// Per-wheel vertical loads {fl, fr, rl, rr} from quasi-static load
/// transfer. Negative results are floored at zero with the wheel_lift
/// diagnostic set. A zero track width disables the lateral split.
struct WheelLoads {
  std::array<double, 4> fz{};
  bool wheel_lift = false;

  double front_axle() const { return fz[0] + fz[1]; }
  double rear_axle() const { return fz[2] + fz[3]; }
};

WheelLoads vertical_forces(double ax, double ay, const VehicleParams& params);

}  // namespace vmv::dynamics
