#include "mcrowds/session.hpp"

#include <cmath>
#include <set>

#include "json_codec.hpp"

namespace mcrowds {

using nlohmann::json;
using detail::ojson;

struct Session::StartRequest {
  bool resume = false;
  std::optional<std::string> preset;
  std::optional<json> config;
  std::optional<std::uint64_t> seed;
  bool lockstep = false;
};

namespace {

struct ProtocolError {
  std::string code;
  std::string message;
};

void check_fields(const json& msg, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : msg.items()) {
    if (item.key() != "kind" && !ok.count(item.key()))
      throw ProtocolError{"malformed", "unexpected field '" + item.key() + "'"};
  }
}

double finite_number(const json& msg, const char* key) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_number()) throw ProtocolError{"malformed", std::string("'") + key + "' must be a number"};
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ProtocolError{"malformed", std::string("'") + key + "' must be finite"};
  return v;
}

ojson point(Vec2 p) { return ojson::array({p.x, p.y}); }

std::string frame_line(const SimState& state) {
  ojson out;
  out["kind"] = "Frame";
  ojson frame = detail::frame_object(snapshot(state));
  for (auto& [key, value] : frame.items()) out[key] = std::move(value);
  return out.dump();
}

}  // namespace

Session::Session(ScenarioConfig default_config)
    : default_config_(std::move(default_config)), active_config_(default_config_) {}

std::string Session::error_line(std::string_view code, std::string_view message) {
  ojson out;
  out["kind"] = "Error";
  out["code"] = code;
  out["msg"] = message;
  return out.dump();
}

std::string Session::start_line() const {
  ojson out;
  out["kind"] = "Start";
  out["scenario"] = active_config_.name;
  out["tick"] = state_->tick;
  out["dt"] = state_->dt;
  out["world"] = {{"min", point(active_config_.world.min)}, {"max", point(active_config_.world.max)}};
  ojson goals = ojson::array();
  for (const Vec2& g : active_config_.goals) goals.push_back(point(g));
  out["goals"] = std::move(goals);
  ojson markers = ojson::array();
  for (const Marker& m : state_->marker_field->markers()) markers.push_back(point(m.position));
  out["markers"] = std::move(markers);
  out["avatar_mode"] = to_string(active_config_.avatar_mode);
  out["participation"] = state_->avatar ? ojson(to_string(state_->avatar->participation)) : ojson(nullptr);
  out["lockstep"] = lockstep_;
  return out.dump();
}

std::string Session::step_and_frame() {
  if (mailbox_) {
    *state_ = apply_avatar_input(std::move(*state_), *mailbox_);
    mailbox_.reset();
  }
  advance(*state_);
  return frame_line(*state_);
}

Session::Reply Session::start(const StartRequest& req) {
  Reply reply;
  if (req.resume) {
    if (phase_ != Phase::Paused || !state_) throw ProtocolError{"protocol", "no paused session to resume"};
    phase_ = Phase::Running;
    reply.lines.push_back(start_line());
    return reply;
  }

  ScenarioConfig config = default_config_;
  try {
    if (req.preset) config = preset(*req.preset);
    if (req.config) config = parse_config(req.config->dump());
    if (req.seed) config.seed = *req.seed;
    state_ = build_state(config);
  } catch (const ConfigError& e) {
    throw ProtocolError{"config", e.what()};
  }
  active_config_ = std::move(config);
  lockstep_ = req.lockstep;
  mailbox_.reset();
  phase_ = Phase::Running;
  reply.lines.push_back(start_line());
  reply.lines.push_back(frame_line(*state_));
  return reply;
}

Session::Reply Session::handle(std::string_view line) {
  try {
    json msg = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (msg.is_discarded() || !msg.is_object()) throw ProtocolError{"malformed", "message is not a JSON object"};
    const auto kind_it = msg.find("kind");
    if (kind_it == msg.end() || !kind_it->is_string()) throw ProtocolError{"malformed", "missing 'kind'"};
    const std::string kind = kind_it->get<std::string>();

    if (kind == "Hello") {
      check_fields(msg, {"version"});
      const auto v = msg.find("version");
      if (v == msg.end() || !v->is_number_integer()) throw ProtocolError{"malformed", "'version' must be an integer"};
      if (v->get<int>() != kProtocolVersion)
        throw ProtocolError{"version", "unsupported protocol version " + std::to_string(v->get<int>()) +
                                           " (server speaks 1)"};
      greeted_ = true;
      if (phase_ == Phase::AwaitHello) phase_ = Phase::Ready;
      ojson out;
      out["kind"] = "Hello";
      out["version"] = kProtocolVersion;
      out["server"] = "mcrowds";
      return {{out.dump()}, false};
    }

    if (!greeted_) throw ProtocolError{"protocol", "Hello must come first"};

    if (kind == "Start") {
      check_fields(msg, {"resume", "preset", "config", "seed", "lockstep"});
      StartRequest req;
      if (auto it = msg.find("resume"); it != msg.end()) {
        if (!it->is_boolean()) throw ProtocolError{"malformed", "'resume' must be a boolean"};
        req.resume = it->get<bool>();
      }
      if (auto it = msg.find("preset"); it != msg.end()) {
        if (!it->is_string()) throw ProtocolError{"malformed", "'preset' must be a string"};
        req.preset = it->get<std::string>();
      }
      if (auto it = msg.find("config"); it != msg.end()) {
        if (!it->is_object()) throw ProtocolError{"malformed", "'config' must be an object"};
        req.config = *it;
      }
      if (req.preset && req.config) throw ProtocolError{"malformed", "give either 'preset' or 'config', not both"};
      if (auto it = msg.find("seed"); it != msg.end()) {
        if (!it->is_number_unsigned()) throw ProtocolError{"malformed", "'seed' must be a non-negative integer"};
        req.seed = it->get<std::uint64_t>();
      }
      if (auto it = msg.find("lockstep"); it != msg.end()) {
        if (!it->is_boolean()) throw ProtocolError{"malformed", "'lockstep' must be a boolean"};
        req.lockstep = it->get<bool>();
      }
      return start(req);
    }

    if (kind == "Input") {
      check_fields(msg, {"dx", "dy"});
      const Vec2 dir{finite_number(msg, "dx"), finite_number(msg, "dy")};
      if (phase_ != Phase::Running) throw ProtocolError{"protocol", "Input outside a running session"};
      mailbox_ = dir;
      if (lockstep_) return {{step_and_frame()}, false};
      return {};
    }

    if (kind == "Stop") {
      check_fields(msg, {});
      ojson out;
      out["kind"] = "Stop";
      out["tick"] = state_ ? state_->tick : 0;
      phase_ = Phase::Stopped;
      state_.reset();
      mailbox_.reset();
      return {{out.dump()}, false};
    }

    throw ProtocolError{"malformed", "unknown message kind '" + kind + "'"};
  } catch (const ProtocolError& e) {
    return {{error_line(e.code, e.message)}, true};
  }
}

std::optional<std::string> Session::tick() {
  if (phase_ != Phase::Running || lockstep_ || !state_) return std::nullopt;
  return step_and_frame();
}

void Session::disconnect() {
  greeted_ = false;
  if (phase_ == Phase::Running) phase_ = Phase::Paused;
}

std::vector<std::string> replay_client_lines(const InputTrace& trace) {
  std::vector<std::string> lines;
  lines.push_back(R"({"kind":"Hello","version":1})");
  ojson start;
  start["kind"] = "Start";
  start["config"] = ojson::parse(render_config(trace.scenario));
  start["lockstep"] = true;
  lines.push_back(start.dump());
  for (std::int64_t t = 0; t < trace.ticks; ++t) {
    const Vec2 in = trace.input_at(t);
    ojson msg;
    msg["kind"] = "Input";
    msg["dx"] = in.x;
    msg["dy"] = in.y;
    lines.push_back(msg.dump());
  }
  return lines;
}

std::vector<FrameRecord> replay_session(const InputTrace& trace) {
  Session session(trace.scenario);
  std::vector<FrameRecord> frames;
  for (const std::string& line : replay_client_lines(trace)) {
    const Session::Reply reply = session.handle(line);
    for (const std::string& out : reply.lines) {
      const json j = json::parse(out);
      if (j.at("kind") == "Frame") frames.push_back(detail::frame_from_object(j));
      if (j.at("kind") == "Error") throw std::runtime_error("replay rejected: " + j.at("msg").get<std::string>());
    }
    if (reply.close) break;
  }
  return frames;
}

}  // namespace mcrowds
