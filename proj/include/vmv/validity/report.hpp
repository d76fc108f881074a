#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "vmv/validity/compare.hpp"

namespace vmv::validity {

inline constexpr int kNumVariables = 3;
const char* variable_name(int variable);  // "Vx", "Vy", "yaw_rate"

enum Domain { kBelow = 0, kAbove = 1 };
const char* domain_name(int domain);  // "below", "above"

/// Per-trajectory error set for one model; input of the domain split.
struct TrajectoryErrors {
  std::string trajectory;
  double ay_max = 0.0;
  ModelId model{};
  std::vector<StepError> errors;
};

struct DomainStats {
  double mae = 0.0;
  double std_dev = 0.0;
  std::size_t n = 0;
};

struct TrajectoryRow {
  std::string trajectory;
  double ay_max = 0.0;
  ModelId model{};
  int variable = 0;
  double mae = 0.0;
};

struct DomainErrorReport {
  double threshold = 4.905;
  /// [model][variable][domain]; n = 0 marks an empty cell.
  std::array<std::array<std::array<DomainStats, 2>, kNumVariables>, 4> stats{};
  /// [model][variable]; NaN when undefined (empty domain or below-MAE ~ 0).
  std::array<std::array<double, kNumVariables>, 4> pct_increase{};
  /// Long-format per-trajectory rows, sorted by realized ay_max.
  std::vector<TrajectoryRow> per_trajectory;
  std::array<bool, 2> domain_empty{true, true};

  const DomainStats& at(ModelId m, int variable, int domain) const {
    return stats[static_cast<int>(m)][variable][domain];
  }
  double increase(ModelId m, int variable) const {
    return pct_increase[static_cast<int>(m)][variable];
  }
};

/// Groups whole trajectories by their realized max |ay| against the
/// threshold and aggregates MAE and standard deviation per model, variable
/// and domain. Empty domains are flagged, not errors.
DomainErrorReport split_by_domain(const std::vector<TrajectoryErrors>& inputs,
                                  double threshold);

/// 100 * (above - below) / below, NaN when below < 1e-12.
double percent_increase(double mae_below, double mae_above);

/// `model,variable,domain,mae,std,n,pct_increase` rows.
void write_domain_csv(const std::filesystem::path& path,
                      const DomainErrorReport& report);

/// `trajectory,ay_max,model,variable,mae` rows.
void write_per_trajectory_csv(const std::filesystem::path& path,
                              const DomainErrorReport& report);

}  // namespace vmv::validity
