#include "mcrowds/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "mcrowds/metrics.hpp"
#include "mcrowds/random.hpp"
#include "mcrowds/scenario.hpp"
#include "mcrowds/session.hpp"
#include "mcrowds/simulation.hpp"

namespace mcrowds {

int required_passes(int seeds) { return (9 * seeds + 9) / 10; }

AuctionResult brute_force_auction(const SimState& state) {
  AuctionResult out;
  out.by_agent.resize(state.agents.size());
  if (!state.marker_field) return out;

  struct Competitor {
    Vec2 position;
    double radius;
    int id;
    int slot;  // index into agents, -1 for avatar
  };
  std::vector<Competitor> competitors;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const Agent& a = state.agents[i];
    competitors.push_back({a.position, a.capture_radius, a.id, static_cast<int>(i)});
  }
  if (state.avatar && state.avatar->competing())
    competitors.push_back({state.avatar->position, state.avatar->capture_radius, kAvatarCompetitorId, -1});

  for (const Marker& m : state.marker_field->markers()) {
    const Competitor* best = nullptr;
    double best_d = 0.0;
    for (const Competitor& c : competitors) {
      const double dx = m.position.x - c.position.x;
      const double dy = m.position.y - c.position.y;
      const double d = dx * dx + dy * dy;
      if (d > c.radius * c.radius) continue;
      if (!best || d < best_d || (d == best_d && c.id < best->id)) {
        best = &c;
        best_d = d;
      }
    }
    if (!best) continue;
    if (best->slot < 0)
      out.avatar.push_back(m.id);
    else
      out.by_agent[static_cast<std::size_t>(best->slot)].push_back(m.id);
  }
  return out;
}

InputTrace scripted_trace(const ScenarioConfig& scenario, std::int64_t ticks) {
  InputTrace trace;
  trace.scenario = scenario;
  trace.ticks = ticks;
  trace.inputs = {{0, {-1.0, 0.0}},    {60, {0.0, 1.0}},  {90, {-0.7071067811865476, -0.7071067811865476}},
                  {150, {0.0, 0.0}},   {200, {-1.0, 0.2}}, {260, {1.0, 0.0}}};
  return trace;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// Runs fn(seed) for each seed with up to `jobs` threads; results come back in
// seed order regardless of completion order.
template <class Fn>
auto per_seed(const BatteryOptions& opts, Fn fn) {
  using R = std::invoke_result_t<Fn, std::uint64_t>;
  std::vector<R> results(static_cast<std::size_t>(std::max(opts.seeds, 0)));
  const unsigned jobs = std::max(1u, opts.jobs);
  for (std::size_t start = 0; start < results.size(); start += jobs) {
    std::vector<std::future<R>> batch;
    for (std::size_t i = start; i < std::min(results.size(), start + jobs); ++i) {
      const std::uint64_t seed = opts.first_seed + i;
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, fn, seed));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) results[start + k] = batch[k].get();
  }
  return results;
}

struct SeedOutcome {
  bool pass = false;
  std::string values;
};

CheckResult tally(std::string name, const BatteryOptions& opts, const std::vector<SeedOutcome>& outcomes,
                  Clock::time_point t0) {
  int passed = 0;
  std::string failures;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].pass) {
      ++passed;
    } else {
      failures += " [seed " + std::to_string(opts.first_seed + i) + ": " + outcomes[i].values + "]";
    }
  }
  CheckResult r;
  r.name = std::move(name);
  r.passed = passed >= required_passes(opts.seeds);
  r.detail = std::to_string(passed) + "/" + std::to_string(opts.seeds) + " seeds (need " +
             std::to_string(required_passes(opts.seeds)) + ")" + failures;
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace

CheckResult check_extraversion_ordering(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  const auto outcomes = per_seed(opts, [&](std::uint64_t seed) {
    ScenarioConfig c = preset("fig2_hetero");
    c.seed = seed;
    const FrameRecord f = run_final(c, opts.ticks, opts.rules);
    const GroupMetrics hi = compute_group_metrics(f, "E1.0", c.goal_for_label("E1.0"));
    const GroupMetrics lo = compute_group_metrics(f, "E0.8", c.goal_for_label("E0.8"));
    SeedOutcome o;
    o.pass = hi.mean_dist_to_goal < lo.mean_dist_to_goal && hi.mean_intra_pairwise_dist < lo.mean_intra_pairwise_dist;
    o.values = "goal " + fmt(hi.mean_dist_to_goal) + " vs " + fmt(lo.mean_dist_to_goal) + ", pairwise " +
               fmt(hi.mean_intra_pairwise_dist) + " vs " + fmt(lo.mean_intra_pairwise_dist);
    return o;
  });
  return tally("extraversion_ordering", opts, outcomes, t0);
}

CheckResult check_dispersal_ordering(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  const auto outcomes = per_seed(opts, [&](std::uint64_t seed) {
    ScenarioConfig nl = preset("fig4_normal_life");
    ScenarioConfig bc = preset("fig5_biocrowds");
    nl.seed = bc.seed = seed;
    const auto fn = run_final(nl, opts.ticks, opts.rules);
    const auto fb = run_final(bc, opts.ticks, opts.rules);
    const double a_nl = compute_group_metrics(fn, "normal_life", nl.goals[0]).convex_hull_area;
    const double a_bc = compute_group_metrics(fb, "biocrowds", bc.goals[0]).convex_hull_area;
    return SeedOutcome{a_nl > a_bc, "hull " + fmt(a_nl) + " vs " + fmt(a_bc)};
  });
  return tally("dispersal_ordering", opts, outcomes, t0);
}

CheckResult check_homogeneous_extraversion(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  const auto outcomes = per_seed(opts, [&](std::uint64_t seed) {
    ScenarioConfig low = preset("fig3_homo_e08");
    low.seed = seed;
    ScenarioConfig high = low;
    for (auto& g : high.spawn_groups) g.extraversion = 1.0;
    const auto fl = run_final(low, opts.ticks, opts.rules);
    const auto fh = run_final(high, opts.ticks, opts.rules);
    const std::string label = low.spawn_groups.front().profile_label;
    const double nn_low = compute_group_metrics(fl, label, low.goals[0]).mean_nearest_neighbor_dist;
    const double nn_high = compute_group_metrics(fh, label, high.goals[0]).mean_nearest_neighbor_dist;
    return SeedOutcome{nn_low > nn_high, "nearest neighbor " + fmt(nn_low) + " vs " + fmt(nn_high)};
  });
  return tally("homogeneous_extraversion", opts, outcomes, t0);
}

CheckResult check_mode_collapse(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  constexpr int kConfigs = 1000;
  constexpr double kTol = 1e-9;
  std::mt19937_64 gen(derive_seed(opts.first_seed, 0xc011a95e));
  double worst_e1 = 0.0;
  double worst_e05 = 0.0;
  for (int i = 0; i < kConfigs; ++i) {
    const double radius = uniform(gen, 0.5, 3.0);
    const int n = 1 + static_cast<int>(gen() % 150);
    std::vector<WeightedMarker> markers;
    for (int k = 0; k < n; ++k) {
      const double r = radius * std::sqrt(uniform01(gen));
      const double a = uniform(gen, 0.0, 6.283185307179586);
      markers.push_back({k, {r * std::cos(a), r * std::sin(a)}, 0.0});
    }
    const Vec2 goal_dir{uniform(gen, -20.0, 20.0), uniform(gen, -20.0, 20.0)};
    const int cap = 1 + static_cast<int>(gen() % 120);

    const Motion bio = compute_motion({BehaviorVariant::BioCrowds, cap}, goal_dir, markers, 1.0, opts.rules);
    const Motion nl = compute_motion({BehaviorVariant::NormalLife, cap}, goal_dir, markers, 1.0, opts.rules);
    const Motion e1 = compute_motion({BehaviorVariant::Extraversion, cap}, goal_dir, markers, 1.0, opts.rules);
    const Motion e05 = compute_motion({BehaviorVariant::Extraversion, cap}, goal_dir, markers, 0.5, opts.rules);

    const Vec2 d1 = e1.vector - bio.vector * e1.bias;
    const Vec2 d05 = e05.vector - nl.vector * 0.5;
    worst_e1 = std::max({worst_e1, std::abs(d1.x), std::abs(d1.y)});
    worst_e05 = std::max({worst_e05, std::abs(d05.x), std::abs(d05.y)});
  }
  CheckResult r;
  r.name = "mode_collapse";
  r.passed = worst_e1 <= kTol && worst_e05 <= kTol;
  r.detail = std::to_string(kConfigs) + " configs, max |E=1 - bias*BioCrowds| = " + fmt(worst_e1) +
             ", max |E=0.5 - 0.5*NormalLife| = " + fmt(worst_e05) + " (tol 1e-9)";
  r.seconds = seconds_since(t0);
  return r;
}

CheckResult check_equation_units(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  std::mt19937_64 gen(derive_seed(opts.first_seed, 0xe9a7));
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(gen() % 120);
    std::vector<WeightedMarker> ms;
    for (int k = 0; k < n; ++k) ms.push_back({k, {uniform(gen, -2, 2), uniform(gen, -2, 2)}, 0.0});
    const auto w = biocrowds_weights({uniform(gen, -5, 5), uniform(gen, -5, 5)}, ms);
    double sum = 0.0;
    for (const auto& m : w) sum += m.weight;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  expect(worst_sum <= 1e-9, "weight sum off by " + fmt(worst_sum));
  expect(comfort(70, 70) == 1.0, "comfort(70,70) != 1");
  expect(comfort(0, 70) == 0.0, "comfort(0,70) != 0");
  expect(comfort(35, 70) == 0.5, "comfort(35,70) != 0.5");
  expect(comfort_bias(1.0 / 3.0) == 0.5, "comfort_bias(1/3) != 0.5");
  expect(comfort_bias(1.0) == 1.0, "comfort_bias(1) != 1");
  expect(comfort_bias(0.0) == 0.0, "comfort_bias(0) != 0");
  expect(std::abs(kernel_f({1, 0}, {1, 0}) - 1.0) <= 1e-12, "f(theta=0, d=1) != 1");
  expect(std::abs(kernel_f({1, 0}, {-1, 0})) <= 1e-12, "f(theta=180) != 0");
  expect(std::abs(kernel_f({1, 0}, {0, 3}) - 0.25) <= 1e-12, "f(theta=90, d=3) != 0.25");

  const std::vector<WeightedMarker> one{{0, {1, 0}, 0.2}};
  const auto ev = [&](double bias, double e) { return opts.rules.extraversion(one, bias, e).front().weight; };
  const auto nv = [&](double bias) { return opts.rules.normal_life(one, bias).front().weight; };
  expect(std::abs(ev(0.5, 0.8) - 0.18) <= 1e-12, "w''(bias .5, w .2, E .8) = " + fmt(ev(0.5, 0.8)) + " != 0.18");
  expect(std::abs(ev(1.0, 1.0) - 0.2) <= 1e-12, "w''(bias 1, E 1) != w");
  expect(std::abs(ev(0.3, 0.0) - 0.7) <= 1e-12, "w''(E 0) != 1 - bias");
  expect(std::abs(nv(0.5) - 0.6) <= 1e-12, "w'(bias .5, w .2) != 0.6");
  expect(std::abs(nv(1.0) - 0.2) <= 1e-12, "w'(bias 1) != w");
  expect(std::abs(nv(0.0) - 1.0) <= 1e-12, "w'(bias 0) != 1");

  CheckResult r;
  r.name = "equation_units";
  r.passed = failures.empty();
  r.detail = failures.empty() ? "all spot values exact" : "";
  for (const auto& f : failures) r.detail += (r.detail.empty() ? "" : "; ") + f;
  r.seconds = seconds_since(t0);
  return r;
}

CheckResult check_auction_oracle(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  constexpr int kInstances = 100;
  int matched = 0;
  std::string first_mismatch;
  for (int inst = 0; inst < kInstances; ++inst) {
    std::mt19937_64 gen(derive_seed(opts.first_seed + static_cast<std::uint64_t>(inst), 0xa0c7));
    const Rect world{{0, 0}, {10, 10}};
    const int n_markers = static_cast<int>(gen() % 201);
    std::vector<Marker> markers;
    for (int k = 0; k < n_markers; ++k) markers.push_back({k, {uniform(gen, 0, 10), uniform(gen, 0, 10)}});

    SimState s;
    const int n_agents = 1 + static_cast<int>(gen() % 5);
    const bool with_avatar = n_agents < 5 && gen() % 2 == 0;
    double max_r = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      Agent a;
      a.id = i;
      a.position = {uniform(gen, 0, 10), uniform(gen, 0, 10)};
      a.capture_radius = uniform(gen, 0.5, 3.0);
      max_r = std::max(max_r, a.capture_radius);
      s.agents.push_back(a);
    }
    if (with_avatar) {
      Avatar av;
      av.participation = Participation::BioCrowdsAgent;
      av.position = {uniform(gen, 0, 10), uniform(gen, 0, 10)};
      av.capture_radius = uniform(gen, 0.5, 3.0);
      max_r = std::max(max_r, av.capture_radius);
      s.avatar = av;
    }
    s.marker_field = std::make_shared<const MarkerField>(world, std::move(markers), max_r);

    const AuctionResult got = auction_markers(s);
    const AuctionResult want = brute_force_auction(s);
    if (got.by_agent == want.by_agent && got.avatar == want.avatar) {
      ++matched;
    } else if (first_mismatch.empty()) {
      first_mismatch = " first mismatch at instance " + std::to_string(inst);
    }
  }
  CheckResult r;
  r.name = "auction_oracle";
  r.passed = matched == kInstances;
  r.detail = std::to_string(matched) + "/" + std::to_string(kInstances) + " instances match brute force" + first_mismatch;
  r.seconds = seconds_since(t0);
  return r;
}

CheckResult check_determinism(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  std::vector<std::string> mismatched;
  for (const std::string& name : preset_names()) {
    ScenarioConfig c = preset(name);
    c.seed = opts.first_seed;
    const auto a = run(c, opts.ticks, nullptr, opts.rules);
    const auto b = run(c, opts.ticks, nullptr, opts.rules);
    if (state_hash(a) != state_hash(b)) mismatched.push_back(name);
  }
  CheckResult r;
  r.name = "determinism";
  r.passed = mismatched.empty();
  r.detail = std::to_string(preset_names().size() - mismatched.size()) + "/" + std::to_string(preset_names().size()) +
             " presets hash-identical over " + std::to_string(opts.ticks) + " ticks";
  for (const auto& m : mismatched) r.detail += " [differs: " + m + "]";
  r.seconds = seconds_since(t0);
  return r;
}

CheckResult check_blocking(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  // Markers only in the far corner; the agent at (2, 2) with radius 2 sees none.
  std::mt19937_64 gen(derive_seed(opts.first_seed, 0xb10c));
  std::vector<Marker> markers;
  for (int k = 0; k < 300; ++k) markers.push_back({k, {uniform(gen, 12, 20), uniform(gen, 12, 20)}});
  SimState s;
  s.marker_field = std::make_shared<const MarkerField>(Rect{{0, 0}, {20, 20}}, std::move(markers), 2.0);
  s.mode.variant = BehaviorVariant::Extraversion;
  Agent starved;
  starved.id = 0;
  starved.position = {2.0, 2.0};
  starved.goal = {18.0, 18.0};
  starved.extraversion = 0.8;
  s.agents.push_back(starved);
  Agent fed = starved;
  fed.id = 1;
  fed.position = {14.0, 14.0};
  s.agents.push_back(fed);

  const Vec2 start = s.agents[0].position;
  double travelled = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vec2 before = s.agents[0].position;
    advance(s, opts.rules);
    travelled += distance(before, s.agents[0].position);
  }
  CheckResult r;
  r.name = "blocking";
  r.passed = travelled == 0.0 && s.agents[0].position == start;
  r.detail = "starved agent moved " + fmt(travelled) + " m over 100 ticks (control agent moved " +
             fmt(distance(fed.position, s.agents[1].position)) + " m)";
  r.seconds = seconds_since(t0);
  return r;
}

CheckResult check_replay_equivalence(const BatteryOptions& opts) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "replay_equivalence";
  std::string detail;
  bool all = true;
  for (const char* name : {"scenario1", "scenario2", "scenario3"}) {
    ScenarioConfig c = preset(name);
    c.seed = opts.first_seed;
    const InputTrace trace = scripted_trace(c, 300);
    const std::string served = state_hash(replay_session(trace));
    const std::string headless = state_hash(run(c, trace.ticks, &trace));
    const bool same = served == headless;
    all = all && same;
    detail += std::string(detail.empty() ? "" : ", ") + name + (same ? " equal" : " DIFFER");
  }
  r.passed = all;
  r.detail = detail;
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CheckResult> run_battery(const BatteryOptions& opts) {
  return {check_extraversion_ordering(opts), check_dispersal_ordering(opts), check_homogeneous_extraversion(opts),
          check_mode_collapse(opts),         check_equation_units(opts),     check_auction_oracle(opts),
          check_determinism(opts),           check_blocking(opts),           check_replay_equivalence(opts)};
}

}  // namespace mcrowds
