#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mcrowds/geometry.hpp"

namespace mcrowds {

enum class BehaviorVariant { BioCrowds, NormalLife, Extraversion };

std::string_view to_string(BehaviorVariant v);
/// Throws std::invalid_argument for unknown names.
BehaviorVariant behavior_variant_from_string(std::string_view name);

struct BehaviorMode {
  BehaviorVariant variant = BehaviorVariant::BioCrowds;
  /// Marker count at which comfort saturates.
  int marker_cap = 70;

  friend bool operator==(const BehaviorMode&, const BehaviorMode&) = default;
};

/// A claimed marker as seen from its owner: offset is marker position minus
/// owner position.
struct WeightedMarker {
  int marker_id = 0;
  Vec2 offset;
  double weight = 0.0;
};

/// Goal-alignment kernel (1 + cos theta) / (1 + |offset|), in [0, 2].
/// A zero offset counts as perfectly aligned; a zero goal direction drops the
/// angular term and leaves 1 / (1 + |offset|).
double kernel_f(Vec2 goal_dir, Vec2 marker_offset);

/// Normalized kernel weights. Falls back to uniform 1/N when every kernel
/// value is zero (all markers directly behind the agent).
std::vector<WeightedMarker> biocrowds_weights(Vec2 goal_dir, std::span<const WeightedMarker> markers);

/// min(n / cap, 1).
double comfort(int n_markers, int marker_cap);

/// sin(comfort * pi / 2). Exact at 0, 1/3 and 1.
double comfort_bias(double comfort);

/// bias * w + (1 - bias); not renormalized.
std::vector<WeightedMarker> normal_life_weights(std::span<const WeightedMarker> base, double bias);

/// bias * w * E + (1 - bias) * (1 - E); not renormalized.
std::vector<WeightedMarker> extraversion_weights(std::span<const WeightedMarker> base, double bias,
                                                 double extraversion);

/// Sum of weight * offset; zero for an empty set.
Vec2 motion_vector(std::span<const WeightedMarker> weighted);

using NormalLifeRule = std::vector<WeightedMarker> (*)(std::span<const WeightedMarker>, double);
using ExtraversionRule = std::vector<WeightedMarker> (*)(std::span<const WeightedMarker>, double,
                                                         double);

/// Weighting functions used by compute_motion. Swappable so that mutation
/// tests can check the acceptance battery actually detects a broken rule.
struct WeightingRules {
  NormalLifeRule normal_life = &normal_life_weights;
  ExtraversionRule extraversion = &extraversion_weights;
};

struct Motion {
  Vec2 vector;
  double comfort = 0.0;
  double bias = 0.0;
};

/// Full per-agent pipeline: kernel weights, comfort, then the mode's
/// reweighting, summed into a motion vector.
Motion compute_motion(const BehaviorMode& mode, Vec2 goal_dir, std::span<const WeightedMarker> markers,
                      double extraversion, const WeightingRules& rules = {});

}  // namespace mcrowds
