#include "vmv/harness/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "vmv/errors.hpp"
#include "vmv/estimation/observer.hpp"
#include "vmv/harness/thread_pool.hpp"
#include "vmv/validity/report.hpp"

namespace vmv::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string bundle_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "traj_%03zu", index);
  return buf;
}

std::uint64_t sensor_seed(std::uint64_t maneuver_seed) {
  return maneuver_seed ^ 0xa5a5a5a55a5a5a5aull;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LoadedBundle {
  plant::Trajectory trajectory;
  double ay_max = 0.0;
};

std::vector<LoadedBundle> load_bundles(const std::filesystem::path& data_dir) {
  const auto dirs = list_bundles(data_dir);
  if (dirs.empty()) {
    throw DataError("no trajectory bundles under " + data_dir.string());
  }
  std::vector<LoadedBundle> bundles(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    bundles[i].trajectory = plant::read_trajectory(dirs[i]);
    bundles[i].ay_max = bundles[i].trajectory.ay_max();
  }
  return bundles;
}

void write_estimates_csv(const std::filesystem::path& path,
                         const estimation::ObserverRun& run) {
  std::string out = "t,Vx_hat,Vy_hat,yaw_rate_hat,Vx_err,Vy_err,yaw_rate_err\n";
  for (const auto& e : run.estimates) {
    out += format_number(e.t);
    out += ',';
    out += format_number(e.vx);
    out += ',';
    out += format_number(e.vy);
    out += ',';
    out += format_number(e.yaw_rate);
    out += ',';
    out += format_number(e.e_vx);
    out += ',';
    out += format_number(e.e_vy);
    out += ',';
    out += format_number(e.e_yaw_rate);
    out += '\n';
  }
  write_text_file(path, out);
}

// Minimal CSV table reader for report merging.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  CsvTable table;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw ParseError(path.string(), line_no, "ragged row");
      }
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  ordered_json trajectories = ordered_json::array();
  for (const auto& e : manifest.trajectories) {
    trajectories.push_back(ordered_json{{"name", e.name},
                                        {"seed", e.seed},
                                        {"target_ay_max", e.target_ay_max},
                                        {"realized_ay_max", e.realized_ay_max},
                                        {"target_reached", e.target_reached},
                                        {"iterations", e.iterations}});
  }
  const ordered_json j{{"tool_version", manifest.tool_version},
                       {"config_hash", manifest.config_hash},
                       {"trajectories", trajectories},
                       {"files", manifest.files}};
  write_text_file(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open manifest " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("manifest " + path.string() + ": " + e.what());
  }
  RunManifest m;
  m.tool_version = j.value("tool_version", "");
  m.config_hash = j.value("config_hash", "");
  for (const auto& t : j.value("trajectories", json::array())) {
    RunManifest::Entry e;
    e.name = t.value("name", "");
    e.seed = t.value("seed", std::uint64_t{0});
    e.target_ay_max = t.value("target_ay_max", 0.0);
    e.realized_ay_max = t.value("realized_ay_max", 0.0);
    e.target_reached = t.value("target_reached", false);
    e.iterations = t.value("iterations", 0);
    m.trajectories.push_back(e);
  }
  for (const auto& f : j.value("files", json::array())) {
    m.files.push_back(f.get<std::string>());
  }
  return m;
}

std::vector<std::filesystem::path> list_bundles(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::vector<std::filesystem::path> bundles;
  if (std::filesystem::exists(manifest_path)) {
    const auto manifest = read_manifest(manifest_path);
    for (const auto& e : manifest.trajectories) {
      const auto bundle = dir / "trajectories" / e.name;
      if (!std::filesystem::exists(bundle / "truth.csv")) {
        throw DataError("missing bundle " + e.name + " under " + dir.string());
      }
      bundles.push_back(bundle);
    }
    return bundles;
  }
  const auto root = dir / "trajectories";
  if (!std::filesystem::exists(root)) {
    return bundles;
  }
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory() &&
        std::filesystem::exists(entry.path() / "truth.csv")) {
      bundles.push_back(entry.path());
    }
  }
  std::sort(bundles.begin(), bundles.end());
  return bundles;
}

int cmd_simulate(const ExperimentConfig& config) {
  config.validate();
  if (config.suite.empty()) {
    throw DataError("simulate: empty maneuver suite");
  }

  const auto out = config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(out / "trajectories", ec);
  if (ec) {
    throw DataError("cannot create output directory " + out.string() + ": " +
                    ec.message());
  }
  {  // fail before simulating anything if the directory is not writable
    const auto probe = out / ".write_probe";
    std::ofstream test(probe);
    if (!test) {
      throw DataError("output directory not writable: " + out.string());
    }
    test.close();
    std::filesystem::remove(probe);
  }

  const auto plant_config = config.plant_config();

  struct SimResult {
    plant::ManeuverResult maneuver;
    std::string name;
  };
  std::vector<SimResult> results(config.suite.size());

  parallel_for(config.suite.size(), config.jobs, [&](std::size_t i) {
    const auto& spec = config.suite[i];
    SimResult r;
    r.name = bundle_name(i);
    r.maneuver = plant::generate_maneuver(spec, plant_config, config.road);
    r.maneuver.trajectory.name = r.name;
    r.maneuver.trajectory.sensors = plant::sample_sensors(
        r.maneuver.trajectory.truth, r.maneuver.actuation, config.noise,
        sensor_seed(spec.seed));
    results[i] = std::move(r);
  });

  RunManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.config_hash = config.config_hash();

  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& spec = config.suite[i];
    const auto& r = results[i];
    const auto bundle_dir = out / "trajectories" / r.name;

    ordered_json meta{
        {"name", r.name},
        {"spec",
         ordered_json{{"kind", plant::maneuver_kind_name(spec.kind)},
                      {"target_ay_max", spec.target_ay_max},
                      {"initial_speed", spec.initial_speed},
                      {"duration", spec.duration},
                      {"seed", spec.seed}}},
        {"sensor_seed", sensor_seed(spec.seed)},
        {"realized_ay_max", r.maneuver.realized_ay_max},
        {"target_reached", r.maneuver.target_reached},
        {"iterations", r.maneuver.iterations},
    };
    plant::write_trajectory(bundle_dir, r.maneuver.trajectory, meta.dump(2) + "\n");

    manifest.trajectories.push_back(RunManifest::Entry{
        r.name, spec.seed, spec.target_ay_max, r.maneuver.realized_ay_max,
        r.maneuver.target_reached, r.maneuver.iterations});
    manifest.files.push_back("trajectories/" + r.name + "/truth.csv");
    manifest.files.push_back("trajectories/" + r.name + "/sensors.csv");
    manifest.files.push_back("trajectories/" + r.name + "/meta");

    if (!r.maneuver.target_reached) {
      std::cerr << r.name << ": target ay_max "
                << format_number(spec.target_ay_max) << " not reached, achieved "
                << format_number(r.maneuver.realized_ay_max) << "\n";
    }
  }

  manifest.files.push_back("manifest.json");
  write_manifest(out / "manifest.json", manifest);
  std::cout << "simulated " << results.size() << " trajectories into "
            << out.string() << "\n";
  return 0;
}

int cmd_compare(const ExperimentConfig& config, const std::filesystem::path& data_dir) {
  const auto bundles = load_bundles(data_dir);
  const auto& models = config.models;

  const std::size_t tasks = bundles.size() * models.size();
  std::vector<validity::TrajectoryErrors> errors(tasks);
  parallel_for(tasks, config.jobs, [&](std::size_t task) {
    const std::size_t b = task / models.size();
    const auto model = models[task % models.size()];
    auto& slot = errors[task];
    slot.trajectory = bundles[b].trajectory.name;
    slot.ay_max = bundles[b].ay_max;
    slot.model = model;
    slot.errors = validity::compare_trajectory(
        bundles[b].trajectory, model, tire_for_model(model, config.tires),
        config.vehicle);
  });

  const auto report = validity::split_by_domain(errors, config.threshold);
  const auto report_dir = data_dir / "reports";
  std::filesystem::create_directories(report_dir);
  validity::write_domain_csv(report_dir / "validity_domain.csv", report);
  validity::write_per_trajectory_csv(report_dir / "validity_per_trajectory.csv",
                                     report);
  if (report.domain_empty[validity::kBelow]) {
    std::cerr << "warning: below-threshold domain is empty\n";
  }
  if (report.domain_empty[validity::kAbove]) {
    std::cerr << "warning: above-threshold domain is empty\n";
  }
  std::cout << "compared " << models.size() << " models over " << bundles.size()
            << " trajectories\n";
  return 0;
}

int cmd_observe(const ExperimentConfig& config, const std::filesystem::path& data_dir) {
  const auto bundles = load_bundles(data_dir);
  const auto& models = config.models;

  struct Slot {
    validity::TrajectoryErrors errors;
    estimation::ObserverRun run;
    bool failed = false;
    std::string failure;
  };
  const std::size_t tasks = bundles.size() * models.size();
  std::vector<Slot> slots(tasks);

  const auto estimates_dir = data_dir / "estimates";
  for (const auto model : models) {
    std::filesystem::create_directories(estimates_dir / validity::model_name(model));
  }

  parallel_for(tasks, config.jobs, [&](std::size_t task) {
    const std::size_t b = task / models.size();
    const auto model = models[task % models.size()];
    auto& slot = slots[task];
    slot.errors.trajectory = bundles[b].trajectory.name;
    slot.errors.ay_max = bundles[b].ay_max;
    slot.errors.model = model;
    try {
      const auto tire = tire_for_model(model, config.tires);
      const auto noise = estimation::covariance_from_errors(
          bundles[b].trajectory, model, tire, config.vehicle);
      slot.run = estimation::run_observer(bundles[b].trajectory, model, tire,
                                          config.vehicle, noise);
      for (const auto& e : slot.run.estimates) {
        slot.errors.errors.push_back(
            validity::StepError{e.t, e.e_vx, e.e_vy, e.e_yaw_rate, 0.0});
      }
      write_estimates_csv(estimates_dir / validity::model_name(model) /
                              (bundles[b].trajectory.name + ".csv"),
                          slot.run);
    } catch (const NumericalFault& fault) {
      slot.failed = true;
      slot.failure = fault.what();
    }
  });

  std::vector<validity::TrajectoryErrors> errors;
  std::string failures = "trajectory,model,error\n";
  std::size_t failure_count = 0;
  for (auto& slot : slots) {
    if (slot.failed) {
      ++failure_count;
      failures += slot.errors.trajectory;
      failures += ',';
      failures += validity::model_name(slot.errors.model);
      failures += ',';
      failures += slot.failure;
      failures += '\n';
      std::cerr << "observer failed on " << slot.errors.trajectory << " ("
                << validity::model_name(slot.errors.model)
                << "): " << slot.failure << "\n";
      continue;
    }
    errors.push_back(std::move(slot.errors));
  }

  const auto report = validity::split_by_domain(errors, config.threshold);
  const auto report_dir = data_dir / "reports";
  std::filesystem::create_directories(report_dir);
  validity::write_domain_csv(report_dir / "observer_domain.csv", report);
  validity::write_per_trajectory_csv(report_dir / "observer_per_trajectory.csv",
                                     report);
  if (failure_count > 0) {
    write_text_file(report_dir / "observer_failures.csv", failures);
  }
  std::cout << "observed " << models.size() << " observers over "
            << bundles.size() << " trajectories (" << failure_count
            << " failures)\n";
  return 0;
}

int cmd_report(const std::filesystem::path& data_dir) {
  const auto report_dir = data_dir / "reports";
  const auto validity_path = report_dir / "validity_domain.csv";
  const auto observer_path = report_dir / "observer_domain.csv";

  const bool have_validity = std::filesystem::exists(validity_path);
  const bool have_observer = std::filesystem::exists(observer_path);
  if (!have_validity && !have_observer) {
    throw DataError("report: no reports under " + report_dir.string() +
                    " (run compare/observe first)");
  }

  std::string consolidated = "source,model,variable,domain,mae,std,n,pct_increase\n";
  std::string summary;
  auto merge = [&](const char* source, const std::filesystem::path& path) {
    const auto table = read_csv_table(path);
    for (const auto& row : table.rows) {
      consolidated += source;
      for (const auto& field : row) {
        consolidated += ',';
        consolidated += field;
      }
      consolidated += '\n';
      // model,variable,domain,...,pct: one summary line per (model, variable)
      if (row[2] == "above") {
        summary += "  ";
        summary += source;
        summary += ' ' + row[0] + ' ' + row[1] + ": " + row[6] + "%\n";
      }
    }
  };

  if (have_validity) {
    merge("model", validity_path);
  } else {
    std::cerr << "warning: validity report missing, consolidating observer only\n";
  }
  if (have_observer) {
    merge("observer", observer_path);
  } else {
    std::cerr << "warning: observer report missing, consolidating validity only\n";
  }
  write_text_file(report_dir / "consolidated.csv", consolidated);

  // Long-format per-trajectory merge for plotting.
  std::string long_rows = "source,trajectory,ay_max,model,variable,mae\n";
  for (const auto& [source, name] :
       {std::pair{"model", "validity_per_trajectory.csv"},
        std::pair{"observer", "observer_per_trajectory.csv"}}) {
    const auto path = report_dir / name;
    if (!std::filesystem::exists(path)) {
      continue;
    }
    const auto table = read_csv_table(path);
    for (const auto& row : table.rows) {
      long_rows += source;
      for (const auto& field : row) {
        long_rows += ',';
        long_rows += field;
      }
      long_rows += '\n';
    }
  }
  write_text_file(report_dir / "consolidated_per_trajectory.csv", long_rows);

  std::cout << "MAE increase below -> above threshold (percent):\n" << summary;
  std::cout << "consolidated reports written to " << report_dir.string() << "\n";
  return 0;
}

int cmd_self_check(const ExperimentConfig& config) {
  // Synthetic 50 Hz input series: slalom steering, near-rolling wheel
  // speeds with a slow ripple.
  constexpr double kDt = 0.02;
  constexpr std::size_t kSteps = 1500;
  constexpr double kSpeed = 20.0;
  std::vector<dynamics::ControlInput> inputs(kSteps);
  for (std::size_t k = 0; k < kSteps; ++k) {
    const double t = static_cast<double>(k) * kDt;
    auto& u = inputs[k];
    u.steer = 0.04 * std::sin(2.0 * 3.14159265358979323846 * 0.25 * t);
    const double omega = kSpeed / config.vehicle.tire_radius *
                         (1.0 + 0.01 * std::sin(0.8 * t));
    u.wheel_speed = {omega, omega, omega, omega};
  }
  const validity::StateVec3 init{kSpeed, 0.0, 0.0};

  bool all_pass = true;
  for (const auto model : validity::kAllModels) {
    const auto tire = tire_for_model(model, config.tires);
    const auto traj =
        validity::rollout_model(model, tire, config.vehicle, init, inputs, kDt);
    const auto errors =
        validity::compare_trajectory(traj, model, tire, config.vehicle);
    double worst = 0.0;
    for (const auto& e : errors) {
      worst = std::max({worst, e.e_vx, e.e_vy, e.e_yaw_rate});
    }
    const bool pass = worst < 1e-6;
    all_pass = all_pass && pass;
    std::cout << "self-check " << validity::model_name(model)
              << " re-integration: max error " << format_number(worst) << " -> "
              << (pass ? "PASS" : "FAIL") << "\n";
  }

  {
    const auto model = validity::ModelId::kDbmPacejka;
    const auto tire = tire_for_model(model, config.tires);
    const auto traj =
        validity::rollout_model(model, tire, config.vehicle, init, inputs, kDt);
    estimation::NoiseConfig noise;
    noise.process = estimation::Vec3::Constant(1e-8);
    noise.measurement = estimation::Vec3::Constant(1e-8);
    const auto run =
        estimation::run_observer(traj, model, tire, config.vehicle, noise);
    const bool pass =
        run.mae_vx < 1e-3 && run.mae_vy < 1e-3 && run.mae_yaw_rate < 1e-3;
    all_pass = all_pass && pass;
    std::cout << "self-check dbm-pacejka observer: MAE ("
              << format_number(run.mae_vx) << ", " << format_number(run.mae_vy)
              << ", " << format_number(run.mae_yaw_rate) << ") -> "
              << (pass ? "PASS" : "FAIL") << "\n";
  }

  return all_pass ? 0 : 3;
}

}  // namespace vmv::harness
