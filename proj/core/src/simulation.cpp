#include "mcrowds/simulation.hpp"

#include <stdexcept>

namespace mcrowds {

namespace {

void drive(SimState& state, const InputTrace* trace, const WeightingRules& rules) {
  if (trace && state.avatar) state = apply_avatar_input(std::move(state), trace->input_at(state.tick));
  advance(state, rules);
}

}  // namespace

std::vector<FrameRecord> run(const ScenarioConfig& config, std::int64_t n_ticks, const InputTrace* trace,
                             const WeightingRules& rules) {
  if (n_ticks < 0) throw ConfigError("n_ticks", "must be >= 0");
  SimState state = build_state(config);
  std::vector<FrameRecord> frames;
  frames.reserve(static_cast<std::size_t>(n_ticks) + 1);
  frames.push_back(snapshot(state));
  for (std::int64_t t = 0; t < n_ticks; ++t) {
    drive(state, trace, rules);
    frames.push_back(snapshot(state));
  }
  return frames;
}

FrameRecord run_final(const ScenarioConfig& config, std::int64_t n_ticks, const WeightingRules& rules) {
  if (n_ticks < 0) throw ConfigError("n_ticks", "must be >= 0");
  SimState state = build_state(config);
  for (std::int64_t t = 0; t < n_ticks; ++t) drive(state, nullptr, rules);
  return snapshot(state);
}

}  // namespace mcrowds
