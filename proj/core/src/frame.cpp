#include "mcrowds/frame.hpp"

#include <stdexcept>

#include "json_codec.hpp"

namespace mcrowds {

FrameRecord snapshot(const SimState& state) {
  FrameRecord f;
  f.tick = state.tick;
  f.agents.reserve(state.agents.size());
  for (const Agent& a : state.agents) {
    f.agents.push_back({a.id, a.position, a.comfort, static_cast<int>(a.assigned_markers.size()),
                        a.extraversion, a.profile_label});
  }
  if (state.avatar) f.avatar = AvatarRecord{state.avatar->position, state.avatar->participation};
  return f;
}

Participation participation_from_string(std::string_view name) {
  if (name == "Spectator") return Participation::Spectator;
  if (name == "BioCrowdsAgent") return Participation::BioCrowdsAgent;
  if (name == "NormalLifeAgent") return Participation::NormalLifeAgent;
  throw std::invalid_argument("unknown avatar participation '" + std::string(name) + "'");
}

namespace detail {

ojson frame_object(const FrameRecord& frame) {
  ojson agents = ojson::array();
  for (const AgentRecord& a : frame.agents) {
    ojson rec;
    rec["id"] = a.id;
    rec["x"] = a.position.x;
    rec["y"] = a.position.y;
    rec["comfort"] = a.comfort;
    rec["n_markers"] = a.n_assigned_markers;
    rec["extraversion"] = a.extraversion;
    rec["profile"] = a.profile_label;
    agents.push_back(std::move(rec));
  }
  ojson out;
  out["tick"] = frame.tick;
  out["agents"] = std::move(agents);
  if (frame.avatar) {
    ojson av;
    av["x"] = frame.avatar->position.x;
    av["y"] = frame.avatar->position.y;
    av["mode"] = std::string(to_string(frame.avatar->mode));
    out["avatar"] = std::move(av);
  } else {
    out["avatar"] = nullptr;
  }
  return out;
}

FrameRecord frame_from_object(const nlohmann::json& j) {
  try {
    FrameRecord f;
    f.tick = j.at("tick").get<std::int64_t>();
    for (const auto& a : j.at("agents")) {
      f.agents.push_back({a.at("id").get<int>(),
                          {a.at("x").get<double>(), a.at("y").get<double>()},
                          a.at("comfort").get<double>(),
                          a.at("n_markers").get<int>(),
                          a.at("extraversion").get<double>(),
                          a.at("profile").get<std::string>()});
    }
    const auto& av = j.at("avatar");
    if (!av.is_null()) {
      f.avatar = AvatarRecord{{av.at("x").get<double>(), av.at("y").get<double>()},
                              participation_from_string(av.at("mode").get<std::string>())};
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed frame record: ") + e.what());
  }
}

}  // namespace detail

std::string frame_to_json(const FrameRecord& frame) { return detail::frame_object(frame).dump(); }

FrameRecord frame_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed frame record: ") + e.what());
  }
  return detail::frame_from_object(j);
}

}  // namespace mcrowds
