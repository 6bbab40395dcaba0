#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/engine.hpp"
#include "mcrowds/geometry.hpp"

namespace mcrowds {

inline constexpr int kTrajectorySchemaVersion = 1;

struct AgentRecord {
  int id = 0;
  Vec2 position;
  double comfort = 0.0;
  int n_assigned_markers = 0;
  double extraversion = 0.0;
  std::string profile_label;

  friend bool operator==(const AgentRecord&, const AgentRecord&) = default;
};

struct AvatarRecord {
  Vec2 position;
  Participation mode = Participation::Spectator;

  friend bool operator==(const AvatarRecord&, const AvatarRecord&) = default;
};

/// Immutable per-tick snapshot of a SimState.
struct FrameRecord {
  std::int64_t tick = 0;
  std::vector<AgentRecord> agents;
  std::optional<AvatarRecord> avatar;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

FrameRecord snapshot(const SimState& state);

/// Single-line JSON object: {"tick":..,"agents":[..],"avatar":{..}|null}.
/// Doubles are written in shortest round-trip form, so parsing is lossless.
std::string frame_to_json(const FrameRecord& frame);

/// Throws std::invalid_argument on malformed input.
FrameRecord frame_from_json(std::string_view line);

Participation participation_from_string(std::string_view name);

}  // namespace mcrowds
