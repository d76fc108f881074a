#include "vmv/dynamics/vehicle_params.hpp"

#include <stdexcept>
#include <string>

namespace vmv::dynamics {

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string("vehicle params: ") + what);
  }
}

}  // namespace

void VehicleParams::validate() const {
  require(total_mass > 0.0, "total_mass must be > 0");
  require(suspended_mass > 0.0, "suspended_mass must be > 0");
  require(suspended_mass <= total_mass, "suspended_mass must not exceed total_mass");
  require(inertia_roll > 0.0 && inertia_pitch > 0.0 && inertia_yaw > 0.0,
          "inertias must be > 0");
  require(dist_front > 0.0 && dist_rear > 0.0, "axle distances must be > 0");
  require(wheelbase() > 0.0, "wheelbase must be > 0");
  require(half_track_left >= 0.0 && half_track_right >= 0.0,
          "half tracks must be >= 0");
  require(track() > 0.0, "track width must be > 0");
  require(cog_height > 0.0 && aero_height > 0.0, "heights must be > 0");
  require(tire_radius > 0.0, "tire_radius must be > 0");
  require(wheel_inertia > 0.0, "wheel_inertia must be > 0");
  require(air_density > 0.0 && frontal_area > 0.0, "aero parameters must be > 0");
  require(drag_coeff >= 0.0, "drag_coeff must be >= 0");
  require(gravity > 0.0, "gravity must be > 0");
}

VehicleParams vehicle_preset(std::string_view name) {
  if (name == "mid_sedan") {
    return VehicleParams{};
  }
  throw std::invalid_argument("unknown vehicle preset: " + std::string(name));
}

}  // namespace vmv::dynamics
