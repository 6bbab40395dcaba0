#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/engine.hpp"
#include "mcrowds/frame.hpp"
#include "mcrowds/scenario.hpp"
#include "mcrowds/trace.hpp"

namespace mcrowds {

inline constexpr int kProtocolVersion = 1;

/// Transport-independent state machine for one interactive session.
///
/// Messages are single-line JSON objects with a "kind" field.
///
///   client -> server
///     {"kind":"Hello","version":1}
///     {"kind":"Start","preset":"scenario2"}            optional "seed", "lockstep"
///     {"kind":"Start","config":{...scenario...}}
///     {"kind":"Start","resume":true}                   continue a paused session
///     {"kind":"Input","dx":1,"dy":0}
///     {"kind":"Stop"}
///
///   server -> client
///     {"kind":"Hello","version":1,"server":"mcrowds"}
///     {"kind":"Start","scenario":..,"tick":..,"dt":..,"world":..,"goals":..,
///      "markers":[[x,y],..],"avatar_mode":..,"participation":..,"lockstep":..}
///     {"kind":"Frame","tick":..,"agents":[..],"avatar":{..}|null}
///     {"kind":"Stop","tick":..}
///     {"kind":"Error","code":..,"msg":..}
///
/// Paced sessions step once per tick() call; the transport calls it every dt
/// of wall-clock time. Input goes into a single-slot mailbox that the next
/// tick consumes, so only the latest Input before a tick counts and an input
/// stays in effect until replaced. Lockstep sessions step exactly once per
/// Input instead, which is what scripted replays use.
class Session {
 public:
  struct Reply {
    std::vector<std::string> lines;
    bool close = false;
  };

  explicit Session(ScenarioConfig default_config);

  /// Handles one inbound line. Any malformed or out-of-order message
  /// produces an Error and asks the transport to close.
  Reply handle(std::string_view line);

  /// Advances a running, paced session by one tick and returns the Frame
  /// line. Returns nothing when paused, stopped, or in lockstep.
  std::optional<std::string> tick();

  /// Transport lost the client: the simulation pauses and can be resumed by
  /// a new Hello followed by Start{"resume":true}.
  void disconnect();

  bool running() const { return phase_ == Phase::Running; }
  bool paused() const { return phase_ == Phase::Paused; }
  bool lockstep() const { return lockstep_; }
  double dt() const { return state_ ? state_->dt : default_config_.dt; }
  const std::optional<SimState>& state() const { return state_; }

  static std::string error_line(std::string_view code, std::string_view message);

 private:
  enum class Phase { AwaitHello, Ready, Running, Paused, Stopped };
  struct StartRequest;

  Reply start(const StartRequest& req);
  std::string step_and_frame();
  std::string start_line() const;

  ScenarioConfig default_config_;
  ScenarioConfig active_config_;
  std::optional<SimState> state_;
  std::optional<Vec2> mailbox_;
  Phase phase_ = Phase::AwaitHello;
  bool lockstep_ = false;
  bool greeted_ = false;
};

/// Drives a Session through Hello / Start{lockstep} / one Input per tick using
/// the trace, exactly as a network client would, and returns the frames it
/// emitted (initial frame included).
std::vector<FrameRecord> replay_session(const InputTrace& trace);

/// Lines a client sends to replay `trace` against a live server in lockstep.
std::vector<std::string> replay_client_lines(const InputTrace& trace);

}  // namespace mcrowds
