#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/behavior.hpp"
#include "mcrowds/engine.hpp"
#include "mcrowds/geometry.hpp"

namespace mcrowds {

inline constexpr int kSchemaVersion = 1;

/// Validation or parse failure. `path()` names the offending field in
/// JSON-pointer-like form, e.g. "spawn_groups[1].extraversion".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class AvatarMode { None, Spectator, CompetingAgent };

std::string_view to_string(AvatarMode m);

struct SpawnRegion {
  enum class Shape { Rect, Circle };
  Shape shape = Shape::Rect;
  Rect rect{};                // Rect only
  Vec2 center;                // Circle only
  double radius = 0.0;        // Circle only
  double inner_radius = 0.0;  // Circle only; > 0 makes an annulus

  static SpawnRegion make_rect(Rect r) { return {Shape::Rect, r, {}, 0.0, 0.0}; }
  static SpawnRegion make_circle(Vec2 c, double r, double inner = 0.0) {
    return {Shape::Circle, {}, c, r, inner};
  }

  friend bool operator==(const SpawnRegion&, const SpawnRegion&) = default;
};

struct SpawnGroup {
  int count = 1;
  SpawnRegion region;
  double extraversion = 1.0;
  std::string profile_label;
  int goal_index = 0;
  double capture_radius = 2.0;
  double max_speed = 1.3;

  friend bool operator==(const SpawnGroup&, const SpawnGroup&) = default;
};

struct AvatarConfig {
  Vec2 position;
  double max_speed = 1.3;
  double capture_radius = 2.0;
  double extraversion = 1.0;

  friend bool operator==(const AvatarConfig&, const AvatarConfig&) = default;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name;
  Rect world{};
  std::vector<Polygon> obstacles;
  double marker_density = 6.0;
  std::uint64_t seed = 0;
  double dt = 1.0 / 30.0;
  BehaviorMode mode;
  std::vector<SpawnGroup> spawn_groups;
  std::vector<Vec2> goals;
  AvatarMode avatar_mode = AvatarMode::None;
  AvatarConfig avatar;
  std::int64_t n_ticks = 1500;

  int agent_count() const;
  /// Goal of the spawn group whose profile label is `label`.
  Vec2 goal_for_label(std::string_view label) const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError naming the first violated field.
void validate(const ScenarioConfig& config);

/// Parses and validates a JSON scenario document, filling defaults.
/// Unknown fields are rejected.
ScenarioConfig parse_config(std::string_view text);

/// Canonical JSON rendering: sorted keys, two-space indent, trailing newline.
std::string render_config(const ScenarioConfig& config);

ScenarioConfig load_config_file(const std::string& path);

const std::vector<std::string>& preset_names();

/// Throws ConfigError listing the valid names for unknown presets.
ScenarioConfig preset(std::string_view name);

/// Generates markers, spawns agents and the avatar, and runs the initial
/// auction so tick 0 already carries assignments and comfort.
SimState build_state(const ScenarioConfig& config);

/// Participation implied by the scenario's avatar mode and behavior variant.
Participation avatar_participation(const ScenarioConfig& config);

}  // namespace mcrowds
