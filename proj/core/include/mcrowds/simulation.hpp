#pragma once

#include <cstdint>
#include <vector>

#include "mcrowds/behavior.hpp"
#include "mcrowds/frame.hpp"
#include "mcrowds/scenario.hpp"
#include "mcrowds/trace.hpp"

namespace mcrowds {

/// Builds the scenario and steps it `n_ticks` times. Returns n_ticks + 1
/// frames, the first being the initial state. With a trace, the avatar input
/// in effect at each tick is applied before that tick's step.
std::vector<FrameRecord> run(const ScenarioConfig& config, std::int64_t n_ticks,
                             const InputTrace* trace = nullptr, const WeightingRules& rules = {});

/// Same stepping as run() but keeps only the final frame.
FrameRecord run_final(const ScenarioConfig& config, std::int64_t n_ticks, const WeightingRules& rules = {});

}  // namespace mcrowds
