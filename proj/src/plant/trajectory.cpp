#include "vmv/plant/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vmv/errors.hpp"

namespace vmv::plant {

namespace {

constexpr char kTruthHeader[] = "t,X,Y,psi,Vx,Vy,yaw_rate,ax,ay,roll,pitch,beta";
constexpr char kSensorHeader[] =
    "t,ax_meas,ay_meas,yaw_rate_meas,w_fl,w_fr,w_rl,w_rr,delta";

// Full-precision, locale-free formatting; round-trips exactly through
// from_chars and is byte-stable across runs.
void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::vector<std::string> split_line(const std::string& line) {
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
  return fields;
}

double parse_field(const std::string& field, const std::filesystem::path& path,
                   std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(path.string(), line_no, "invalid number '" + field + "'");
  }
  return value;
}

// Verifies the header and reports the first missing column by name.
void check_header(const std::string& line, const char* expected,
                  const std::filesystem::path& path) {
  if (line == expected) {
    return;
  }
  const auto found = split_line(line);
  for (const auto& want : split_line(expected)) {
    if (std::find(found.begin(), found.end(), want) == found.end()) {
      throw ParseError(path.string(), 1, "missing column '" + want + "'");
    }
  }
  throw ParseError(path.string(), 1,
                   "unexpected header (want '" + std::string(expected) + "')");
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path,
                                           const char* header,
                                           std::size_t columns) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string(), 1, "empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  check_header(line, header, path);

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_line(line);
    if (fields.size() != columns) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()));
    }
    std::vector<double> row(columns);
    for (std::size_t i = 0; i < columns; ++i) {
      row[i] = parse_field(fields[i], path, line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

}  // namespace

double Trajectory::truth_dt() const {
  if (truth.size() < 2) {
    throw DataError("trajectory '" + name + "' has fewer than 2 truth frames");
  }
  return truth[1].t - truth[0].t;
}

double Trajectory::ay_max() const {
  double m = 0.0;
  for (const auto& f : truth) {
    m = std::max(m, std::abs(f.ay));
  }
  return m;
}

void write_truth_csv(const std::filesystem::path& path,
                     const std::vector<GroundTruthFrame>& frames) {
  std::string out(kTruthHeader);
  out += '\n';
  for (const auto& f : frames) {
    const double fields[] = {f.t,  f.x,  f.y,  f.yaw,  f.vx,    f.vy,
                             f.yaw_rate, f.ax, f.ay, f.roll, f.pitch, f.beta};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i > 0) {
        out += ',';
      }
      append_number(out, fields[i]);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<GroundTruthFrame> read_truth_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path, kTruthHeader, 12);
  std::vector<GroundTruthFrame> frames;
  frames.reserve(rows.size());
  for (const auto& r : rows) {
    frames.push_back(GroundTruthFrame{r[0], r[1], r[2], r[3], r[4], r[5], r[6],
                                      r[7], r[8], r[9], r[10], r[11]});
  }
  return frames;
}

void write_sensor_csv(const std::filesystem::path& path,
                      const std::vector<SensorFrame>& frames) {
  std::string out(kSensorHeader);
  out += '\n';
  for (const auto& f : frames) {
    const double fields[] = {f.t,
                             f.ax,
                             f.ay,
                             f.yaw_rate,
                             f.wheel_speed[0],
                             f.wheel_speed[1],
                             f.wheel_speed[2],
                             f.wheel_speed[3],
                             f.steer};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i > 0) {
        out += ',';
      }
      append_number(out, fields[i]);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<SensorFrame> read_sensor_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path, kSensorHeader, 9);
  std::vector<SensorFrame> frames;
  frames.reserve(rows.size());
  for (const auto& r : rows) {
    frames.push_back(
        SensorFrame{r[0], r[1], r[2], r[3], {r[4], r[5], r[6], r[7]}, r[8]});
  }
  return frames;
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                      const std::string& meta_json) {
  std::filesystem::create_directories(dir);
  write_truth_csv(dir / "truth.csv", traj.truth);
  write_sensor_csv(dir / "sensors.csv", traj.sensors);
  write_file(dir / "meta", meta_json);
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
  Trajectory traj;
  traj.name = dir.filename().string();
  traj.truth = read_truth_csv(dir / "truth.csv");
  traj.sensors = read_sensor_csv(dir / "sensors.csv");
  return traj;
}

std::string read_trajectory_meta(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta");
  if (!in) {
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vmv::plant
