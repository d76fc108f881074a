#include "vmv/validity/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "vmv/errors.hpp"

namespace vmv::validity {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double error_component(const StepError& e, int variable) {
  switch (variable) {
    case 0: return e.e_vx;
    case 1: return e.e_vy;
    default: return e.e_yaw_rate;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* variable_name(int variable) {
  switch (variable) {
    case 0: return "Vx";
    case 1: return "Vy";
    case 2: return "yaw_rate";
  }
  return "unknown";
}

const char* domain_name(int domain) { return domain == kBelow ? "below" : "above"; }

double percent_increase(double mae_below, double mae_above) {
  if (!(mae_below >= 1e-12)) {
    return kNan;
  }
  return 100.0 * (mae_above - mae_below) / mae_below;
}

DomainErrorReport split_by_domain(const std::vector<TrajectoryErrors>& inputs,
                                  double threshold) {
  if (threshold <= 0.0) {
    throw std::invalid_argument("split_by_domain: threshold must be > 0");
  }

  DomainErrorReport report;
  report.threshold = threshold;

  // Two-pass aggregation: means first, then deviations.
  struct Cell {
    double sum = 0.0;
    double sq_sum = 0.0;
    std::size_t n = 0;
  };
  std::array<std::array<std::array<Cell, 2>, kNumVariables>, 4> cells{};

  for (const auto& traj : inputs) {
    const int domain = traj.ay_max > threshold ? kAbove : kBelow;
    report.domain_empty[domain] = false;
    const int m = static_cast<int>(traj.model);
    for (int v = 0; v < kNumVariables; ++v) {
      auto& cell = cells[m][v][domain];
      double traj_sum = 0.0;
      for (const auto& e : traj.errors) {
        const double err = error_component(e, v);
        cell.sum += err;
        cell.sq_sum += err * err;
        traj_sum += err;
      }
      cell.n += traj.errors.size();
      report.per_trajectory.push_back(
          TrajectoryRow{traj.trajectory, traj.ay_max, traj.model, v,
                        traj.errors.empty() ? kNan
                                            : traj_sum / traj.errors.size()});
    }
  }

  for (int m = 0; m < 4; ++m) {
    for (int v = 0; v < kNumVariables; ++v) {
      for (int d = 0; d < 2; ++d) {
        const auto& cell = cells[m][v][d];
        auto& stats = report.stats[m][v][d];
        stats.n = cell.n;
        if (cell.n == 0) {
          stats.mae = kNan;
          stats.std_dev = kNan;
          continue;
        }
        stats.mae = cell.sum / cell.n;
        const double var = cell.sq_sum / cell.n - stats.mae * stats.mae;
        stats.std_dev = std::sqrt(std::max(var, 0.0));
      }
      report.pct_increase[m][v] = percent_increase(
          report.stats[m][v][kBelow].mae, report.stats[m][v][kAbove].mae);
    }
  }

  std::stable_sort(report.per_trajectory.begin(), report.per_trajectory.end(),
                   [](const TrajectoryRow& a, const TrajectoryRow& b) {
                     return a.ay_max < b.ay_max;
                   });
  return report;
}

void write_domain_csv(const std::filesystem::path& path,
                      const DomainErrorReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "model,variable,domain,mae,std,n,pct_increase\n";
  for (auto model : kAllModels) {
    const int m = static_cast<int>(model);
    // Only models that contributed samples appear; an empty domain of an
    // active model still gets its n = 0 rows.
    std::size_t samples = 0;
    for (int v = 0; v < kNumVariables; ++v) {
      samples += report.stats[m][v][0].n + report.stats[m][v][1].n;
    }
    if (samples == 0) {
      continue;
    }
    for (int v = 0; v < kNumVariables; ++v) {
      for (int d = 0; d < 2; ++d) {
        const auto& s = report.stats[m][v][d];
        out << model_name(model) << ',' << variable_name(v) << ','
            << domain_name(d) << ',' << format_number(s.mae) << ','
            << format_number(s.std_dev) << ',' << s.n << ','
            << format_number(report.pct_increase[m][v]) << '\n';
      }
    }
  }
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

void write_per_trajectory_csv(const std::filesystem::path& path,
                              const DomainErrorReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << "trajectory,ay_max,model,variable,mae\n";
  for (const auto& row : report.per_trajectory) {
    out << row.trajectory << ',' << format_number(row.ay_max) << ','
        << model_name(row.model) << ',' << variable_name(row.variable) << ','
        << format_number(row.mae) << '\n';
  }
  if (!out) {
    throw DataError("write failed for " + path.string());
  }
}

}  // namespace vmv::validity
