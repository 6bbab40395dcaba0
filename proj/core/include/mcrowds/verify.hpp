#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcrowds/behavior.hpp"
#include "mcrowds/engine.hpp"
#include "mcrowds/trace.hpp"

namespace mcrowds {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct BatteryOptions {
  /// Seeds per ordering check; seeds are first_seed, first_seed + 1, ...
  int seeds = 10;
  std::uint64_t first_seed = 1;
  /// Worker threads for per-seed runs; results merge in seed order.
  unsigned jobs = 1;
  std::int64_t ticks = 1500;
  /// Replaced only by mutation tests.
  WeightingRules rules;
};

/// Seeds that must pass an ordering check: ceil(0.9 * seeds).
int required_passes(int seeds);

/// All-pairs reference assignment: for every marker, the nearest competitor
/// holding it within capture radius, lowest id on exact ties. Independent of
/// the spatial index. Returns the same shape as auction_markers().
AuctionResult brute_force_auction(const SimState& state);

/// Fixed avatar steering script (walk, turn, stand, walk) used by the replay
/// check and the CLI's trace examples.
InputTrace scripted_trace(const ScenarioConfig& scenario, std::int64_t ticks);

CheckResult check_extraversion_ordering(const BatteryOptions& opts);
CheckResult check_dispersal_ordering(const BatteryOptions& opts);
CheckResult check_homogeneous_extraversion(const BatteryOptions& opts);
CheckResult check_mode_collapse(const BatteryOptions& opts);
CheckResult check_equation_units(const BatteryOptions& opts);
CheckResult check_auction_oracle(const BatteryOptions& opts);
CheckResult check_determinism(const BatteryOptions& opts);
CheckResult check_blocking(const BatteryOptions& opts);
CheckResult check_replay_equivalence(const BatteryOptions& opts);

/// Every check above, in that order.
std::vector<CheckResult> run_battery(const BatteryOptions& opts);

}  // namespace mcrowds
