#include "mcrowds/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mcrowds {

std::string_view to_string(BehaviorVariant v) {
  switch (v) {
    case BehaviorVariant::BioCrowds: return "BioCrowds";
    case BehaviorVariant::NormalLife: return "NormalLife";
    case BehaviorVariant::Extraversion: return "Extraversion";
  }
  return "?";
}

BehaviorVariant behavior_variant_from_string(std::string_view name) {
  if (name == "BioCrowds") return BehaviorVariant::BioCrowds;
  if (name == "NormalLife") return BehaviorVariant::NormalLife;
  if (name == "Extraversion") return BehaviorVariant::Extraversion;
  throw std::invalid_argument("unknown behavior variant '" + std::string(name) +
                              "' (expected BioCrowds, NormalLife or Extraversion)");
}

double kernel_f(Vec2 goal_dir, Vec2 marker_offset) {
  const double dist = norm(marker_offset);
  const double goal_len = norm(goal_dir);
  if (goal_len == 0.0) return 1.0 / (1.0 + dist);
  double cos_theta = 1.0;
  if (dist > 0.0) cos_theta = std::clamp(dot(goal_dir, marker_offset) / (goal_len * dist), -1.0, 1.0);
  return (1.0 + cos_theta) / (1.0 + dist);
}

std::vector<WeightedMarker> biocrowds_weights(Vec2 goal_dir, std::span<const WeightedMarker> markers) {
  std::vector<WeightedMarker> out(markers.begin(), markers.end());
  if (out.empty()) return out;
  double total = 0.0;
  for (auto& m : out) {
    m.weight = kernel_f(goal_dir, m.offset);
    total += m.weight;
  }
  if (total > 0.0) {
    for (auto& m : out) m.weight /= total;
  } else {
    const double uniform = 1.0 / static_cast<double>(out.size());
    for (auto& m : out) m.weight = uniform;
  }
  return out;
}

double comfort(int n_markers, int marker_cap) {
  if (n_markers <= 0) return 0.0;
  if (n_markers >= marker_cap) return 1.0;
  return static_cast<double>(n_markers) / static_cast<double>(marker_cap);
}

double comfort_bias(double c) {
  // Pin the values where libm rounding would otherwise leave 1 ulp of error.
  if (c == 0.0) return 0.0;
  if (c == 1.0) return 1.0;
  if (c == 1.0 / 3.0) return 0.5;
  return std::sin(c * std::numbers::pi / 2.0);
}

std::vector<WeightedMarker> normal_life_weights(std::span<const WeightedMarker> base, double bias) {
  std::vector<WeightedMarker> out(base.begin(), base.end());
  for (auto& m : out) m.weight = bias * m.weight + (1.0 - bias);
  return out;
}

std::vector<WeightedMarker> extraversion_weights(std::span<const WeightedMarker> base, double bias,
                                                 double extraversion) {
  std::vector<WeightedMarker> out(base.begin(), base.end());
  for (auto& m : out) m.weight = bias * m.weight * extraversion + (1.0 - bias) * (1.0 - extraversion);
  return out;
}

Vec2 motion_vector(std::span<const WeightedMarker> weighted) {
  Vec2 sum;
  for (const auto& m : weighted) sum += m.offset * m.weight;
  return sum;
}

Motion compute_motion(const BehaviorMode& mode, Vec2 goal_dir, std::span<const WeightedMarker> markers,
                      double extraversion, const WeightingRules& rules) {
  Motion out;
  out.comfort = comfort(static_cast<int>(markers.size()), mode.marker_cap);
  out.bias = comfort_bias(out.comfort);
  if (markers.empty()) return out;

  const auto base = biocrowds_weights(goal_dir, markers);
  switch (mode.variant) {
    case BehaviorVariant::BioCrowds:
      out.vector = motion_vector(base);
      break;
    case BehaviorVariant::NormalLife:
      out.vector = motion_vector(rules.normal_life(base, out.bias));
      break;
    case BehaviorVariant::Extraversion:
      out.vector = motion_vector(rules.extraversion(base, out.bias, extraversion));
      break;
  }
  return out;
}

}  // namespace mcrowds
