#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcrowds/geometry.hpp"
#include "mcrowds/scenario.hpp"

namespace mcrowds {

inline constexpr int kTraceSchemaVersion = 1;

struct TraceInput {
  std::int64_t tick = 0;
  Vec2 dir;

  friend bool operator==(const TraceInput&, const TraceInput&) = default;
};

/// Scripted avatar input. An entry at tick T is the input in effect for the
/// step that starts at tick T, and stays in effect until superseded. Several
/// entries at one tick: the last one wins.
///
/// File format (JSON lines): a header
///   {"schema":"mcrowds.trace","version":1,"preset":"scenario2","seed":7,"ticks":300}
/// where "config" (an inline scenario object) may replace "preset" and
/// "seed" is optional, followed by one {"tick":T,"dx":..,"dy":..} per line.
struct InputTrace {
  ScenarioConfig scenario;
  std::int64_t ticks = 0;
  std::vector<TraceInput> inputs;

  /// Input in effect for the step starting at `tick`; zero before the first entry.
  Vec2 input_at(std::int64_t tick) const;
};

InputTrace parse_trace(std::string_view text);
InputTrace load_trace(const std::string& path);
std::string render_trace(const InputTrace& trace);

}  // namespace mcrowds
