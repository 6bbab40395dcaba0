#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/frame.hpp"
#include "mcrowds/geometry.hpp"
#include "mcrowds/scenario.hpp"

namespace mcrowds {

/// Spatial statistics of one profile group in one frame.
struct GroupMetrics {
  std::string profile_label;
  int n_agents = 0;
  double mean_dist_to_goal = 0.0;
  /// Mean over unordered pairs; 0 with fewer than 2 agents.
  double mean_intra_pairwise_dist = 0.0;
  /// 0 with fewer than 3 agents or all agents collinear.
  double convex_hull_area = 0.0;
  /// Mean distance to the nearest other group member; 0 with fewer than 2 agents.
  double mean_nearest_neighbor_dist = 0.0;
};

/// Monotone-chain hull, counter-clockwise, collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

double convex_hull_area(std::span<const Vec2> points);

/// Throws std::invalid_argument if no agent in `frame` carries `label`.
GroupMetrics compute_group_metrics(const FrameRecord& frame, std::string_view label, Vec2 goal);

/// Metrics for every profile label in the config, in spawn-group order
/// (duplicate labels reported once).
std::vector<GroupMetrics> compute_all_groups(const FrameRecord& frame, const ScenarioConfig& config);

struct TrajectoryMeta {
  std::string scenario;
  std::uint64_t seed = 0;
};

/// Writes a header line followed by one frame per line, in the given order.
/// Throws std::runtime_error naming the path on I/O failure.
void export_trajectories(std::span<const FrameRecord> frames, const std::string& path,
                         const TrajectoryMeta& meta = {});

std::vector<FrameRecord> read_trajectories(const std::string& path);

/// SHA-256 (hex) over positions quantized to 1e-6 m, in frame and agent order.
std::string state_hash(std::span<const FrameRecord> frames);

struct MetricsRow {
  std::int64_t tick = 0;
  GroupMetrics metrics;
};

inline constexpr std::string_view kMetricsCsvHeader =
    "tick,profile_label,n_agents,mean_dist_to_goal,mean_intra_pairwise_dist,convex_hull_area,"
    "mean_nearest_neighbor_dist";

void write_metrics_csv(std::span<const MetricsRow> rows, const std::string& path);

}  // namespace mcrowds
