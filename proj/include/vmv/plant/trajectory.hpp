#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace vmv::plant {

/// One ground-truth sample (100 Hz for plant data).
struct GroundTruthFrame {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double yaw_rate = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double beta = 0.0;
};

/// One sensor sample (50 Hz): noisy accelerations, yaw rate, wheel speeds
/// and steering angle.
struct SensorFrame {
  double t = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double yaw_rate = 0.0;
  std::array<double, 4> wheel_speed{};
  double steer = 0.0;
};

struct Trajectory {
  std::string name;
  std::vector<GroundTruthFrame> truth;
  std::vector<SensorFrame> sensors;

  /// Time step of the truth stream (from the first two frames).
  double truth_dt() const;
  /// Largest |ay| over the truth stream; the domain-assignment statistic.
  double ay_max() const;
};

void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<GroundTruthFrame>& frames);
std::vector<GroundTruthFrame> read_truth_csv(const std::filesystem::path& path);

void write_sensor_csv(const std::filesystem::path& path,
                      const std::vector<SensorFrame>& frames);
std::vector<SensorFrame> read_sensor_csv(const std::filesystem::path& path);

/// Writes a trajectory bundle: <dir>/truth.csv, <dir>/sensors.csv and a
/// `meta` file with the supplied structured text (JSON).
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                      const std::string& meta_json);

/// Reads a bundle written by write_trajectory (or assembled externally with
/// the documented headers).
Trajectory read_trajectory(const std::filesystem::path& dir);

/// Meta file contents, empty string when absent.
std::string read_trajectory_meta(const std::filesystem::path& dir);

}  // namespace vmv::plant
