#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/behavior.hpp"
#include "mcrowds/geometry.hpp"
#include "mcrowds/marker_field.hpp"

namespace mcrowds {

struct Agent {
  int id = 0;
  Vec2 position;
  Vec2 goal;
  double capture_radius = 2.0;
  double max_speed = 1.3;
  double extraversion = 1.0;
  /// Comfort from the most recent auction.
  double comfort = 0.0;
  /// Marker ids claimed in the most recent auction, ascending.
  std::vector<int> assigned_markers;
  std::string profile_label;

  friend bool operator==(const Agent&, const Agent&) = default;
};

enum class Participation { Spectator, BioCrowdsAgent, NormalLifeAgent };

std::string_view to_string(Participation p);

/// The human-steered entity. A spectator only moves its camera; the
/// competing participations claim markers like an agent whose goal direction
/// is the current input.
struct Avatar {
  Vec2 position;
  /// Unit vector or zero.
  Vec2 input_dir;
  double max_speed = 1.3;
  Participation participation = Participation::Spectator;
  double capture_radius = 2.0;
  double extraversion = 1.0;
  double comfort = 0.0;
  std::vector<int> assigned_markers;

  bool competing() const { return participation != Participation::Spectator; }

  friend bool operator==(const Avatar&, const Avatar&) = default;
};

/// Auction tie-break id of the avatar: it loses exact ties to every agent.
inline constexpr int kAvatarCompetitorId = std::numeric_limits<int>::max();

struct SimState {
  std::int64_t tick = 0;
  double dt = 1.0 / 30.0;
  std::vector<Agent> agents;
  std::optional<Avatar> avatar;
  std::shared_ptr<const MarkerField> marker_field;
  BehaviorMode mode;
};

/// Marker ids won by each competitor, ascending. `by_agent` is parallel to
/// SimState::agents.
struct AuctionResult {
  std::vector<std::vector<int>> by_agent;
  std::vector<int> avatar;
};

/// Gives every marker to the strictly nearest competitor that has it within
/// capture radius; exact distance ties go to the lowest competitor id. A
/// spectator avatar never competes.
AuctionResult auction_markers(const SimState& state);

/// Runs the auction and stores the result (and the resulting comfort) on the
/// agents and avatar without moving anyone.
void refresh_assignments(SimState& state);

/// Sets the avatar's steering input for the next step. Non-zero inputs are
/// normalized to unit length. No-op without an avatar.
SimState apply_avatar_input(SimState state, Vec2 input_dir);

/// One synchronous update: auction, per-competitor motion from pre-step
/// positions, speed clamp, then tick + 1. Competitors with no markers stay put.
/// Assignments and comfort are refreshed for the new positions before returning.
SimState step(SimState state, const WeightingRules& rules = {});

/// In-place variant of step() for hot loops.
void advance(SimState& state, const WeightingRules& rules = {});

}  // namespace mcrowds
