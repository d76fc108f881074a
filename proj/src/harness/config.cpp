#include "vmv/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "vmv/errors.hpp"

namespace vmv::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// splitmix64; derives independent per-trajectory seeds from the global one.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

double get_num(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

void parse_vehicle(const json& j, dynamics::VehicleParams& p) {
  if (j.is_string()) {
    p = dynamics::vehicle_preset(j.get<std::string>());
    return;
  }
  if (!j.is_object()) {
    throw DataError("config: 'vehicle' must be a preset name or an object");
  }
  if (j.contains("preset")) {
    p = dynamics::vehicle_preset(j.at("preset").get<std::string>());
  }
  p.total_mass = get_num(j, "total_mass", p.total_mass);
  p.suspended_mass = get_num(j, "suspended_mass", p.suspended_mass);
  p.inertia_roll = get_num(j, "inertia_roll", p.inertia_roll);
  p.inertia_pitch = get_num(j, "inertia_pitch", p.inertia_pitch);
  p.inertia_yaw = get_num(j, "inertia_yaw", p.inertia_yaw);
  p.dist_front = get_num(j, "dist_front", p.dist_front);
  p.dist_rear = get_num(j, "dist_rear", p.dist_rear);
  p.half_track_left = get_num(j, "half_track_left", p.half_track_left);
  p.half_track_right = get_num(j, "half_track_right", p.half_track_right);
  p.cog_height = get_num(j, "cog_height", p.cog_height);
  p.aero_height = get_num(j, "aero_height", p.aero_height);
  p.tire_radius = get_num(j, "tire_radius", p.tire_radius);
  p.wheel_inertia = get_num(j, "wheel_inertia", p.wheel_inertia);
  p.air_density = get_num(j, "air_density", p.air_density);
  p.drag_coeff = get_num(j, "drag_coeff", p.drag_coeff);
  p.frontal_area = get_num(j, "frontal_area", p.frontal_area);
  p.gravity = get_num(j, "gravity", p.gravity);
}

void parse_channel(const json& j, dynamics::PacejkaChannel& ch) {
  ch.stiffness_b = get_num(j, "b", ch.stiffness_b);
  ch.shape_c = get_num(j, "c", ch.shape_c);
  ch.peak_d = get_num(j, "d", ch.peak_d);
  ch.curvature_e = get_num(j, "e", ch.curvature_e);
  ch.shift_h = get_num(j, "sh", ch.shift_h);
  ch.shift_v = get_num(j, "sv", ch.shift_v);
  if (j.contains("load_scaled")) {
    ch.load_scaled = j.at("load_scaled").get<bool>();
  }
}

void parse_pacejka(const json& j, dynamics::PacejkaTire& tire) {
  if (j.contains("longitudinal")) {
    parse_channel(j.at("longitudinal"), tire.longitudinal);
  }
  if (j.contains("lateral")) {
    parse_channel(j.at("lateral"), tire.lateral);
  }
  tire.friction = get_num(j, "friction", tire.friction);
}

ordered_json channel_to_json(const dynamics::PacejkaChannel& ch) {
  return ordered_json{{"b", ch.stiffness_b}, {"c", ch.shape_c},
                      {"d", ch.peak_d},      {"e", ch.curvature_e},
                      {"sh", ch.shift_h},    {"sv", ch.shift_v},
                      {"load_scaled", ch.load_scaled}};
}

}  // namespace

std::vector<plant::ManeuverSpec> standard_suite(std::uint64_t seed) {
  constexpr int kCount = 28;
  constexpr double kLow = 2.0;
  constexpr double kHigh = 10.1;
  // Mostly sustained-excitation maneuvers so domain statistics are driven
  // by cornering samples rather than straight running.
  constexpr plant::ManeuverKind kKinds[] = {
      plant::ManeuverKind::kSlalom,          plant::ManeuverKind::kSineSweep,
      plant::ManeuverKind::kDoubleLaneChange, plant::ManeuverKind::kSlalom,
      plant::ManeuverKind::kStepSteer,        plant::ManeuverKind::kSineSweep,
      plant::ManeuverKind::kSlalom,
  };
  constexpr double kSpeeds[] = {16.0, 19.0, 22.0, 17.0};
  constexpr double kDurations[] = {28.0, 32.0, 26.0, 30.0};

  std::vector<plant::ManeuverSpec> suite;
  suite.reserve(kCount);
  for (int i = 0; i < kCount; ++i) {
    plant::ManeuverSpec spec;
    spec.target_ay_max =
        kLow * std::pow(kHigh / kLow, static_cast<double>(i) / (kCount - 1));
    spec.kind = kKinds[i % std::size(kKinds)];
    spec.initial_speed = kSpeeds[i % std::size(kSpeeds)];
    spec.duration = kDurations[i % std::size(kDurations)];
    spec.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    suite.push_back(spec);
  }
  return suite;
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.suite = standard_suite(config.seed);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open config " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("config " + path.string() + ": " + e.what());
  }

  ExperimentConfig config;
  config.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : config.seed;
  if (j.contains("out_dir")) {
    config.out_dir = j.at("out_dir").get<std::string>();
  }
  if (j.contains("jobs")) {
    config.jobs = j.at("jobs").get<std::size_t>();
  }
  config.threshold = get_num(j, "threshold", config.threshold);
  if (j.contains("vehicle")) {
    parse_vehicle(j.at("vehicle"), config.vehicle);
  }
  if (j.contains("road")) {
    const auto& r = j.at("road");
    config.road.slope = get_num(r, "slope", config.road.slope);
    config.road.bank = get_num(r, "bank", config.road.bank);
    config.road.friction = get_num(r, "friction", config.road.friction);
    config.road.wind_speed = get_num(r, "wind_speed", config.road.wind_speed);
  }
  if (j.contains("suspension")) {
    const auto& s = j.at("suspension");
    config.suspension.spring_rate =
        get_num(s, "spring_rate", config.suspension.spring_rate);
    config.suspension.damping = get_num(s, "damping", config.suspension.damping);
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    config.noise.accel = get_num(n, "accel", config.noise.accel);
    config.noise.yaw_rate = get_num(n, "yaw_rate", config.noise.yaw_rate);
    config.noise.wheel_speed = get_num(n, "wheel_speed", config.noise.wheel_speed);
    config.noise.steer = get_num(n, "steer", config.noise.steer);
  }
  if (j.contains("tires")) {
    const auto& t = j.at("tires");
    if (t.contains("linear")) {
      const auto& lin = t.at("linear");
      config.tires.linear.long_stiffness =
          get_num(lin, "long_stiffness", config.tires.linear.long_stiffness);
      config.tires.linear.corner_stiffness =
          get_num(lin, "corner_stiffness", config.tires.linear.corner_stiffness);
    }
    if (t.contains("dugoff")) {
      const auto& dug = t.at("dugoff");
      config.tires.dugoff.long_stiffness =
          get_num(dug, "long_stiffness", config.tires.dugoff.long_stiffness);
      config.tires.dugoff.corner_stiffness =
          get_num(dug, "corner_stiffness", config.tires.dugoff.corner_stiffness);
      config.tires.dugoff.friction =
          get_num(dug, "friction", config.tires.dugoff.friction);
    }
    if (t.contains("pacejka")) {
      parse_pacejka(t.at("pacejka"), config.tires.pacejka);
    }
    // The plant tire defaults to the candidate Pacejka set.
    config.plant_tire = config.tires.pacejka;
    if (t.contains("plant")) {
      parse_pacejka(t.at("plant"), config.plant_tire);
    }
  }
  if (j.contains("models")) {
    config.models.clear();
    for (const auto& name : j.at("models")) {
      const auto id = validity::model_from_name(name.get<std::string>());
      if (!id) {
        throw DataError("config: unknown model '" + name.get<std::string>() + "'");
      }
      config.models.push_back(*id);
    }
  }
  if (!j.contains("suite") ||
      (j.at("suite").is_string() && j.at("suite").get<std::string>() == "standard")) {
    config.suite = standard_suite(config.seed);
  } else {
    const auto& suite = j.at("suite");
    if (!suite.is_array()) {
      throw DataError("config: 'suite' must be \"standard\" or an array");
    }
    std::size_t index = 0;
    for (const auto& m : suite) {
      plant::ManeuverSpec spec;
      spec.kind = plant::maneuver_kind_from_name(m.at("kind").get<std::string>());
      spec.target_ay_max = m.at("target_ay_max").get<double>();
      spec.initial_speed = get_num(m, "initial_speed", spec.initial_speed);
      spec.duration = get_num(m, "duration", spec.duration);
      spec.seed = m.contains("seed") ? m.at("seed").get<std::uint64_t>()
                                     : mix_seed(config.seed, index);
      config.suite.push_back(spec);
      ++index;
    }
  }

  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  vehicle.validate();
  dynamics::validate(tires.linear);
  dynamics::validate(tires.dugoff);
  dynamics::validate(tires.pacejka);
  dynamics::validate(dynamics::TireParams(plant_tire));
  road.validate();
  noise.validate();
  if (threshold <= 0.0) {
    throw DataError("config: threshold must be > 0");
  }
  if (models.empty()) {
    throw DataError("config: at least one model required");
  }
  for (const auto& spec : suite) {
    spec.validate();
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json suite = ordered_json::array();
  for (const auto& s : c.suite) {
    suite.push_back(ordered_json{{"kind", plant::maneuver_kind_name(s.kind)},
                                 {"target_ay_max", s.target_ay_max},
                                 {"initial_speed", s.initial_speed},
                                 {"duration", s.duration},
                                 {"seed", s.seed}});
  }
  ordered_json models = ordered_json::array();
  for (auto id : c.models) {
    models.push_back(validity::model_name(id));
  }
  const auto& v = c.vehicle;
  ordered_json j{
      {"seed", c.seed},
      {"threshold", c.threshold},
      {"vehicle",
       ordered_json{{"total_mass", v.total_mass},
                    {"suspended_mass", v.suspended_mass},
                    {"inertia_roll", v.inertia_roll},
                    {"inertia_pitch", v.inertia_pitch},
                    {"inertia_yaw", v.inertia_yaw},
                    {"dist_front", v.dist_front},
                    {"dist_rear", v.dist_rear},
                    {"half_track_left", v.half_track_left},
                    {"half_track_right", v.half_track_right},
                    {"cog_height", v.cog_height},
                    {"aero_height", v.aero_height},
                    {"tire_radius", v.tire_radius},
                    {"wheel_inertia", v.wheel_inertia},
                    {"air_density", v.air_density},
                    {"drag_coeff", v.drag_coeff},
                    {"frontal_area", v.frontal_area},
                    {"gravity", v.gravity}}},
      {"road",
       ordered_json{{"slope", c.road.slope},
                    {"bank", c.road.bank},
                    {"friction", c.road.friction},
                    {"wind_speed", c.road.wind_speed}}},
      {"suspension",
       ordered_json{{"spring_rate", c.suspension.spring_rate},
                    {"damping", c.suspension.damping}}},
      {"noise",
       ordered_json{{"accel", c.noise.accel},
                    {"yaw_rate", c.noise.yaw_rate},
                    {"wheel_speed", c.noise.wheel_speed},
                    {"steer", c.noise.steer}}},
      {"tires",
       ordered_json{
           {"linear",
            ordered_json{{"long_stiffness", c.tires.linear.long_stiffness},
                         {"corner_stiffness", c.tires.linear.corner_stiffness}}},
           {"dugoff",
            ordered_json{{"long_stiffness", c.tires.dugoff.long_stiffness},
                         {"corner_stiffness", c.tires.dugoff.corner_stiffness},
                         {"friction", c.tires.dugoff.friction}}},
           {"pacejka",
            ordered_json{{"longitudinal", channel_to_json(c.tires.pacejka.longitudinal)},
                         {"lateral", channel_to_json(c.tires.pacejka.lateral)},
                         {"friction", c.tires.pacejka.friction}}},
           {"plant",
            ordered_json{{"longitudinal", channel_to_json(c.plant_tire.longitudinal)},
                         {"lateral", channel_to_json(c.plant_tire.lateral)},
                         {"friction", c.plant_tire.friction}}}}},
      {"models", models},
      {"suite", suite},
  };
  return j.dump(2);
}

std::string ExperimentConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(*this))));
  return buf;
}

}  // namespace vmv::harness
