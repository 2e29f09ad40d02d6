#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace optibatch {

struct TracePoint {
  int t = 0;
  double suboptimality = 0.0;
  double elapsed_s = 0.0;
  std::uint64_t oracle_calls = 0;
};

/// Per-iteration record of a single optimizer run. The suboptimality column
/// tracks the algorithm's designated running output (the weighted average for
/// conversion methods, y_t for NAG, z_t for Heavy-Ball, x_t for GD).
struct RunTrace {
  std::vector<TracePoint> points;
  Eigen::VectorXd output;
  std::uint64_t oracle_calls = 0;
  double total_time_s = 0.0;

  double final_suboptimality() const {
    return points.empty() ? 0.0 : points.back().suboptimality;
  }
};

}  // namespace optibatch
