#include "mcrowds/engine.hpp"

#include <algorithm>

namespace mcrowds {

std::string_view to_string(Participation p) {
  switch (p) {
    case Participation::Spectator: return "Spectator";
    case Participation::BioCrowdsAgent: return "BioCrowdsAgent";
    case Participation::NormalLifeAgent: return "NormalLifeAgent";
  }
  return "?";
}

namespace {

constexpr int kNoOwner = -1;
constexpr int kAvatarSlot = -2;

struct Claim {
  double dist_sq = 0.0;
  int competitor_id = 0;
  int slot = kNoOwner;
};

bool beats(double dist_sq, int competitor_id, const Claim& current) {
  if (current.slot == kNoOwner) return true;
  if (dist_sq != current.dist_sq) return dist_sq < current.dist_sq;
  return competitor_id < current.competitor_id;
}

std::vector<WeightedMarker> gather(const MarkerField& field, const std::vector<int>& ids, Vec2 from) {
  std::vector<WeightedMarker> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back({id, field.marker(id).position - from, 0.0});
  return out;
}

}  // namespace

AuctionResult auction_markers(const SimState& state) {
  AuctionResult result;
  result.by_agent.resize(state.agents.size());
  if (!state.marker_field) return result;
  const MarkerField& field = *state.marker_field;

  std::vector<Claim> claims(field.size());

  auto compete = [&](Vec2 pos, double radius, int competitor_id, int slot) {
    const double r_sq = radius * radius;
    field.index().for_each_candidate(pos, radius, [&](int id) {
      const double d_sq = distance_sq(field.marker(id).position, pos);
      if (d_sq > r_sq) return;
      Claim& c = claims[static_cast<std::size_t>(id)];
      if (beats(d_sq, competitor_id, c)) c = {d_sq, competitor_id, slot};
    });
  };

  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const Agent& a = state.agents[i];
    compete(a.position, a.capture_radius, a.id, static_cast<int>(i));
  }
  if (state.avatar && state.avatar->competing()) {
    compete(state.avatar->position, state.avatar->capture_radius, kAvatarCompetitorId, kAvatarSlot);
  }

  std::vector<std::size_t> counts(state.agents.size() + 1, 0);
  for (const Claim& c : claims) {
    if (c.slot != kNoOwner) ++counts[c.slot == kAvatarSlot ? state.agents.size() : static_cast<std::size_t>(c.slot)];
  }
  for (std::size_t i = 0; i < state.agents.size(); ++i) result.by_agent[i].reserve(counts[i]);
  result.avatar.reserve(counts.back());

  // Sweeping the claim table in id order yields ascending per-owner lists.
  for (std::size_t id = 0; id < claims.size(); ++id) {
    const int slot = claims[id].slot;
    if (slot == kNoOwner) continue;
    if (slot == kAvatarSlot)
      result.avatar.push_back(static_cast<int>(id));
    else
      result.by_agent[static_cast<std::size_t>(slot)].push_back(static_cast<int>(id));
  }
  return result;
}

void refresh_assignments(SimState& state) {
  AuctionResult auction = auction_markers(state);
  const int cap = state.mode.marker_cap;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    Agent& a = state.agents[i];
    a.assigned_markers = std::move(auction.by_agent[i]);
    a.comfort = comfort(static_cast<int>(a.assigned_markers.size()), cap);
  }
  if (state.avatar) {
    state.avatar->assigned_markers = std::move(auction.avatar);
    state.avatar->comfort = comfort(static_cast<int>(state.avatar->assigned_markers.size()), cap);
  }
}

SimState apply_avatar_input(SimState state, Vec2 input_dir) {
  if (!state.avatar) return state;
  const double len = norm(input_dir);
  state.avatar->input_dir = len > 0.0 ? input_dir / len : Vec2{};
  return state;
}

void advance(SimState& state, const WeightingRules& rules) {
  refresh_assignments(state);

  const double dt = state.dt;
  std::vector<Vec2> next(state.agents.size());
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const Agent& a = state.agents[i];
    next[i] = a.position;
    if (a.assigned_markers.empty()) continue;
    const auto markers = gather(*state.marker_field, a.assigned_markers, a.position);
    const Motion motion = compute_motion(state.mode, a.goal - a.position, markers, a.extraversion, rules);
    next[i] = a.position + clamp_length(motion.vector * dt, a.max_speed * dt);
  }

  if (state.avatar) {
    Avatar& av = *state.avatar;
    if (!av.competing()) {
      Vec2 p = av.position + av.input_dir * (av.max_speed * dt);
      if (state.marker_field) {
        const Rect& b = state.marker_field->bounds();
        p = {std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};
      }
      av.position = p;
    } else if (!av.assigned_markers.empty() && norm_sq(av.input_dir) > 0.0) {
      const BehaviorMode mode{av.participation == Participation::BioCrowdsAgent
                                  ? BehaviorVariant::BioCrowds
                                  : BehaviorVariant::Extraversion,
                              state.mode.marker_cap};
      const auto markers = gather(*state.marker_field, av.assigned_markers, av.position);
      const Motion motion = compute_motion(mode, av.input_dir, markers, av.extraversion, rules);
      av.position += clamp_length(motion.vector * dt, av.max_speed * dt);
    }
  }

  for (std::size_t i = 0; i < state.agents.size(); ++i) state.agents[i].position = next[i];
  ++state.tick;
  // Re-auction so stored assignments and comfort describe the new positions.
  refresh_assignments(state);
}

SimState step(SimState state, const WeightingRules& rules) {
  advance(state, rules);
  return state;
}

}  // namespace mcrowds
