#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "vmv/dynamics/bicycle.hpp"
#include "vmv/dynamics/four_wheel.hpp"
#include "vmv/dynamics/slip.hpp"
#include "vmv/dynamics/tire.hpp"
#include "vmv/dynamics/vehicle_params.hpp"
#include "vmv/errors.hpp"

using namespace vmv::dynamics;

namespace {

// Peak of one magic-formula channel by golden-section search; independent
// of the implementation path under test.
double pacejka_peak(const PacejkaChannel& ch, double peak_d, double lo, double hi) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - gr * (hi - lo);
  double b = lo + gr * (hi - lo);
  for (int i = 0; i < 300; ++i) {
    if (magic_formula(a, ch, peak_d) < magic_formula(b, ch, peak_d)) {
      lo = a;
      a = b;
      b = lo + gr * (hi - lo);
    } else {
      hi = b;
      b = a;
      a = hi - gr * (hi - lo);
    }
  }
  return magic_formula(0.5 * (lo + hi), ch, peak_d);
}

}  // namespace

TEST_CASE("slip ratio branches and guards") {
  const double r = 0.316;
  // Wheel speed matching ground speed: zero slip.
  CHECK(slip_ratio(20.0 / r, 20.0, r) == doctest::Approx(0.0).epsilon(1e-12));
  // Driving branch: r*omega = 20, v = 10 -> (20-10)/20 = 0.5.
  CHECK(slip_ratio(20.0 / r, 10.0, r) == doctest::Approx(0.5).epsilon(1e-12));
  // Braking branch: r*omega = 5, v = 10 -> (5-10)/10 = -0.5.
  CHECK(slip_ratio(5.0 / r, 10.0, r) == doctest::Approx(-0.5).epsilon(1e-12));
  // Dead zone at standstill.
  CHECK(slip_ratio(0.0, 0.0, r) == 0.0);
  CHECK(slip_ratio(0.4 / r, 0.3, r) == 0.0);
  // Clamped to [-1, 1] (opposed wheel spin and ground speed).
  CHECK(slip_ratio(10.0 / r, -10.0, r) == 1.0);
  CHECK(slip_ratio(-5.0 / r, 10.0, r) == -1.0);
}

TEST_CASE("slip angles") {
  const VehicleParams p;

  SUBCASE("straight-line equilibrium") {
    const auto angles = bicycle_slip_angles(20.0, 0.0, 0.0, 0.0, p);
    CHECK(angles.front == 0.0);
    CHECK(angles.rear == 0.0);
    for (double a : wheel_slip_angles(20.0, 0.0, 0.0, 0.0, p)) {
      CHECK(a == 0.0);
    }
  }

  SUBCASE("bicycle front, hand value") {
    // 0.05 - atan((0.5 + 0.1*1.134)/20)
    const auto angles = bicycle_slip_angles(20.0, 0.5, 0.1, 0.05, p);
    CHECK(angles.front == doctest::Approx(0.019339611143410314).epsilon(1e-12));
    CHECK(angles.front == doctest::Approx(0.01936).epsilon(5e-3));
  }

  SUBCASE("odd symmetry under the lateral mirror") {
    const auto a = bicycle_slip_angles(18.0, 0.6, 0.2, 0.07, p);
    const auto m = bicycle_slip_angles(18.0, -0.6, -0.2, -0.07, p);
    CHECK(m.front == doctest::Approx(-a.front).epsilon(1e-14));
    CHECK(m.rear == doctest::Approx(-a.rear).epsilon(1e-14));

    // Per wheel the mirror swaps sides (equal half tracks here).
    const auto w = wheel_slip_angles(18.0, 0.6, 0.2, 0.07, p);
    const auto wm = wheel_slip_angles(18.0, -0.6, -0.2, -0.07, p);
    CHECK(wm[kFl] == doctest::Approx(-w[kFr]).epsilon(1e-14));
    CHECK(wm[kFr] == doctest::Approx(-w[kFl]).epsilon(1e-14));
    CHECK(wm[kRl] == doctest::Approx(-w[kRr]).epsilon(1e-14));
    CHECK(wm[kRr] == doctest::Approx(-w[kRl]).epsilon(1e-14));
  }
}

TEST_CASE("linear tire") {
  const LinearTire tire{170000.0, 80000.0};
  const auto zero = tire_force_linear(0.0, 0.0, tire);
  CHECK(zero.fx == 0.0);
  CHECK(zero.fy == 0.0);
  CHECK(tire_force_linear(0.0, 0.01, tire).fy == doctest::Approx(800.0));
  const auto pos = tire_force_linear(0.05, 0.02, tire);
  const auto neg = tire_force_linear(-0.05, -0.02, tire);
  CHECK(neg.fx == -pos.fx);
  CHECK(neg.fy == -pos.fy);
}

TEST_CASE("dugoff tire") {
  SUBCASE("zero slip") {
    const DugoffTire tire;
    const auto f = tire_force_dugoff(0.0, 0.0, 4000.0, tire);
    CHECK(f.fx == 0.0);
    CHECK(f.fy == 0.0);
  }

  SUBCASE("hand value at tau = 0") {
    // lambda = 3000 / (2*50000*tan 0.1) = 0.29900, f = 0.50860,
    // Fyp = 50000 * tan(0.1) * f = 2551.501
    const DugoffTire tire{50000.0, 50000.0, 1.0};
    const auto f = tire_force_dugoff(0.0, 0.1, 3000.0, tire);
    CHECK(f.fy == doctest::Approx(2551.501000953334).epsilon(1e-12));
  }

  SUBCASE("lambda >= 1 reduces to the linear law") {
    const DugoffTire tire{80000.0, 80000.0, 1.0};
    // Small slip at high load: friction never limits.
    const auto f = tire_force_dugoff(0.0, 0.005, 9000.0, tire);
    CHECK(f.fy == doctest::Approx(80000.0 * std::tan(0.005)).epsilon(1e-12));
  }

  SUBCASE("negative load is a domain error") {
    const DugoffTire tire;
    CHECK_THROWS_AS(tire_force_dugoff(0.1, 0.1, -1.0, tire), std::domain_error);
  }

  SUBCASE("combined force bounded by 1.05 mu Fz over the grid") {
    const DugoffTire tire{170000.0, 160000.0, 1.1};
    for (int ti = -9; ti <= 9; ++ti) {
      for (int ai = -10; ai <= 10; ++ai) {
        for (int fi = 1; fi <= 10; ++fi) {
          const double tau = 0.1 * ti;
          const double alpha = 0.05 * ai;
          const double fz = 1000.0 * fi;
          const auto f = tire_force_dugoff(tau, alpha, fz, tire);
          CHECK(std::hypot(f.fx, f.fy) <= 1.05 * tire.friction * fz);
        }
      }
    }
  }
}

TEST_CASE("pacejka tire") {
  SUBCASE("odd-function zero") {
    const PacejkaChannel ch{10.0, 1.9, 1.0, 0.97};
    CHECK(magic_formula(0.0, ch, 5000.0) == 0.0);
  }

  SUBCASE("peak equals D") {
    // B=10, C=2.2, D=2500, E=1: |y| reaches exactly D at the peak slip.
    const PacejkaChannel ch{10.0, 2.2, 2500.0, 1.0, 0.0, 0.0, false};
    const double peak = pacejka_peak(ch, 2500.0, 0.0, 1.0);
    CHECK(std::abs(peak - 2500.0) < 1e-6);
  }

  SUBCASE("odd symmetry and boundedness") {
    const PacejkaChannel ch{12.0, 1.65, 1.0, 0.9};
    const double d = 6000.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + 0.01 * i;
      const double y = magic_formula(x, ch, d);
      CHECK(magic_formula(-x, ch, d) == doctest::Approx(-y).epsilon(1e-12));
      CHECK(std::abs(y) <= d * (1.0 + 1e-12));
    }
  }

  SUBCASE("load-scaled peak") {
    PacejkaTire tire;
    tire.friction = 1.0;
    const double fz = 4000.0;
    const auto f = tire_force_pacejka(0.0, 0.3, fz, tire);
    CHECK(std::abs(f.fy) <= tire.lateral.peak_d * fz * (1.0 + 1e-12));
    CHECK(std::abs(f.fy) > 0.8 * fz);  // deep in saturation
  }
}

TEST_CASE("tire model nesting in the linear region") {
  // Matched cornering stiffness: C_alpha = B*C*D of the lateral channel.
  const double fz = 5000.0;
  const double mu = 1.0;
  PacejkaTire pacejka;
  pacejka.friction = mu;
  const double c_alpha = pacejka.lateral.stiffness_b * pacejka.lateral.shape_c *
                         pacejka.lateral.peak_d * mu * fz;
  const LinearTire linear{c_alpha, c_alpha};
  const DugoffTire dugoff{c_alpha, c_alpha, mu};

  for (double alpha : {0.001, 0.0025, 0.005, 0.0075, 0.01}) {
    for (double sign : {1.0, -1.0}) {
      const double a = sign * alpha;
      const double f_lin = tire_force_linear(0.0, a, linear).fy;
      const double f_dug = tire_force_dugoff(0.0, a, fz, dugoff).fy;
      const double f_pac = tire_force_pacejka(0.0, a, fz, pacejka).fy;
      const double scale = std::abs(f_lin);
      CHECK(std::abs(f_dug - f_lin) <= 0.05 * scale);
      CHECK(std::abs(f_pac - f_lin) <= 0.05 * scale);
      CHECK(std::abs(f_pac - f_dug) <= 0.05 * scale);
    }
  }
}

TEST_CASE("tire to body rotation") {
  SUBCASE("identity") {
    const auto f = tire_to_body(1000.0, 500.0, 4000.0, 0.0, 0.0, 0.0);
    CHECK(f.fx == doctest::Approx(1000.0).epsilon(1e-15));
    CHECK(f.fy == doctest::Approx(500.0).epsilon(1e-15));
  }
  SUBCASE("quarter turn") {
    const auto f = tire_to_body(1000.0, 500.0, 4000.0, M_PI / 2.0, 0.0, 0.0);
    CHECK(f.fx == doctest::Approx(-500.0).epsilon(1e-12));
    CHECK(f.fy == doctest::Approx(1000.0).epsilon(1e-12));
  }
  SUBCASE("hand value") {
    const auto f = tire_to_body(1000.0, 500.0, 0.0, 0.05, 0.0, 0.0);
    CHECK(f.fx == doctest::Approx(973.7606757596271).epsilon(1e-13));
  }
}

TEST_CASE("vertical forces") {
  const VehicleParams p;

  SUBCASE("static distribution") {
    const auto loads = vertical_forces(0.0, 0.0, p);
    CHECK(loads.front_axle() == doctest::Approx(9007.272876106195).epsilon(1e-12));
    const double sum = loads.fz[0] + loads.fz[1] + loads.fz[2] + loads.fz[3];
    CHECK(sum == doctest::Approx(15480.18).epsilon(1e-12));
    CHECK_FALSE(loads.wheel_lift);
  }

  SUBCASE("conservation for arbitrary accelerations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> acc(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
      const auto loads = vertical_forces(acc(rng), acc(rng), p);
      const double sum = loads.fz[0] + loads.fz[1] + loads.fz[2] + loads.fz[3];
      CHECK(sum == doctest::Approx(p.weight()).epsilon(1e-12));
    }
  }

  SUBCASE("lateral split mirrors with ay") {
    const auto pos = vertical_forces(0.0, 5.0, p);
    const auto neg = vertical_forces(0.0, -5.0, p);
    CHECK(pos.fz[kFr] > pos.fz[kFl]);  // left turn loads the right side
    CHECK(pos.fz[kFl] == doctest::Approx(neg.fz[kFr]).epsilon(1e-12));
    CHECK(pos.fz[kRl] == doctest::Approx(neg.fz[kRr]).epsilon(1e-12));
  }

  SUBCASE("wheel lift floors at zero with a flag") {
    const auto loads = vertical_forces(0.0, 25.0, p);
    CHECK(loads.wheel_lift);
    CHECK(loads.fz[kFl] == 0.0);
    CHECK(loads.fz[kRl] == 0.0);
  }
}

namespace {

ControlInput rolling_input(double vx, double r, double steer = 0.0) {
  ControlInput u;
  u.steer = steer;
  const double omega = vx / r;
  u.wheel_speed = {omega, omega, omega, omega};
  return u;
}

BicycleState mirror(const BicycleState& s) {
  return {s.x, -s.y, s.vx, -s.vy, -s.yaw, -s.yaw_rate};
}

}  // namespace

TEST_CASE("bicycle step") {
  VehicleParams p;
  const TireParams tire = PacejkaTire{};

  SUBCASE("straight-line equilibrium advances only X") {
    // Tire radius chosen so vx / r and r * omega are exact in binary.
    p.tire_radius = 0.3125;
    BicycleState s;
    s.vx = 20.0;
    const auto step =
        step_bicycle(s, rolling_input(20.0, p.tire_radius), 0.02, tire, p);
    CHECK(step.state.x == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(step.state.y == 0.0);
    CHECK(step.state.vx == 20.0);
    CHECK(step.state.vy == 0.0);
    CHECK(step.state.yaw == 0.0);
    CHECK(step.state.yaw_rate == 0.0);
  }

  SUBCASE("mirrored input from mirrored state gives the mirrored step") {
    // Holds for each tire model.
    const TireParams tires[] = {LinearTire{}, DugoffTire{}, PacejkaTire{}};
    for (const auto& t : tires) {
      BicycleState s;
      s.vx = 18.0;
      s.vy = 0.4;
      s.yaw = 0.3;
      s.yaw_rate = 0.15;
      s.y = 2.0;
      const auto u = rolling_input(18.0, p.tire_radius, 0.06);
      const auto fwd = step_bicycle(s, u, 0.02, t, p, {0.1, 2.0});
      auto um = u;
      um.steer = -u.steer;
      const auto mir = step_bicycle(mirror(s), um, 0.02, t, p, {0.1, -2.0});
      CHECK(mir.state.y == doctest::Approx(-fwd.state.y).epsilon(1e-12));
      CHECK(mir.state.vy == doctest::Approx(-fwd.state.vy).epsilon(1e-12));
      CHECK(mir.state.yaw == doctest::Approx(-fwd.state.yaw).epsilon(1e-12));
      CHECK(mir.state.yaw_rate ==
            doctest::Approx(-fwd.state.yaw_rate).epsilon(1e-12));
      CHECK(mir.state.vx == doctest::Approx(fwd.state.vx).epsilon(1e-12));
    }
  }

  SUBCASE("identical calls are bit-identical") {
    BicycleState s;
    s.vx = 22.0;
    s.vy = -0.3;
    s.yaw_rate = 0.2;
    const auto u = rolling_input(22.0, p.tire_radius, -0.04);
    const auto a = step_bicycle(s, u, 0.02, tire, p, {0.5, -3.0});
    const auto b = step_bicycle(s, u, 0.02, tire, p, {0.5, -3.0});
    CHECK(std::memcmp(&a.state, &b.state, sizeof(a.state)) == 0);
  }

  SUBCASE("non-finite state faults") {
    BicycleState s;
    s.vx = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(
        step_bicycle(s, rolling_input(20.0, p.tire_radius), 0.02, tire, p),
        vmv::IntegrationFault);
  }
}

TEST_CASE("four-wheel step") {
  VehicleParams p;
  const TireParams tire = PacejkaTire{};

  SUBCASE("straight-line equilibrium advances only X") {
    p.tire_radius = 0.3125;
    FourWheelState s;
    s.vx = 20.0;
    const auto step =
        step_four_wheel(s, rolling_input(20.0, p.tire_radius), 0.02, tire, p);
    CHECK(step.state.x == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(step.state.vx == 20.0);
    CHECK(step.state.vy == 0.0);
    CHECK(step.state.yaw_rate == 0.0);
  }

  SUBCASE("zero track width reduces to the bicycle") {
    VehicleParams lumped = p;
    lumped.half_track_left = 0.0;
    lumped.half_track_right = 0.0;

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uvx(5.0, 30.0);
    std::uniform_real_distribution<double> uvy(-2.0, 2.0);
    std::uniform_real_distribution<double> uyr(-0.5, 0.5);
    std::uniform_real_distribution<double> usteer(-0.3, 0.3);
    std::uniform_real_distribution<double> uslip(0.9, 1.1);
    std::uniform_real_distribution<double> uacc(-3.0, 3.0);

    for (int i = 0; i < 200; ++i) {
      BicycleState b;
      b.vx = uvx(rng);
      b.vy = uvy(rng);
      b.yaw = uvy(rng);
      b.yaw_rate = uyr(rng);
      FourWheelState f;
      f.x = b.x;
      f.y = b.y;
      f.vx = b.vx;
      f.vy = b.vy;
      f.yaw = b.yaw;
      f.yaw_rate = b.yaw_rate;

      ControlInput u;
      u.steer = usteer(rng);
      const double front = b.vx / lumped.tire_radius * uslip(rng);
      const double rear = b.vx / lumped.tire_radius * uslip(rng);
      u.wheel_speed = {front, front, rear, rear};
      const vmv::dynamics::Accel hint{uacc(rng), uacc(rng)};

      const auto bs = step_bicycle(b, u, 0.02, tire, lumped, hint);
      const auto fs = step_four_wheel(f, u, 0.02, tire, lumped, hint);

      auto close = [](double a, double c) {
        return std::abs(a - c) <=
               1e-9 * std::max({1.0, std::abs(a), std::abs(c)});
      };
      CHECK(close(bs.state.vx, fs.state.vx));
      CHECK(close(bs.state.vy, fs.state.vy));
      CHECK(close(bs.state.yaw_rate, fs.state.yaw_rate));
      CHECK(close(bs.state.x, fs.state.x));
      CHECK(close(bs.state.y, fs.state.y));
    }
  }

  SUBCASE("mirrored steering mirrors the step") {
    FourWheelState s;
    s.vx = 20.0;
    s.vy = 0.5;
    s.yaw_rate = 0.2;
    auto u = rolling_input(20.0, p.tire_radius, 0.08);
    const auto fwd = step_four_wheel(s, u, 0.02, tire, p, {0.2, 3.0});

    FourWheelState m = s;
    m.vy = -s.vy;
    m.yaw_rate = -s.yaw_rate;
    auto um = u;
    um.steer = -u.steer;
    const auto mir = step_four_wheel(m, um, 0.02, tire, p, {0.2, -3.0});
    CHECK(mir.state.vy == doctest::Approx(-fwd.state.vy).epsilon(1e-12));
    CHECK(mir.state.yaw_rate == doctest::Approx(-fwd.state.yaw_rate).epsilon(1e-12));
    CHECK(mir.state.vx == doctest::Approx(fwd.state.vx).epsilon(1e-12));
  }
}

TEST_CASE("vehicle params validation") {
  VehicleParams p;
  CHECK_NOTHROW(p.validate());
  p.total_mass = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(vehicle_preset("mid_sedan"));
  CHECK_THROWS_AS(vehicle_preset("unknown"), std::invalid_argument);
}
