// mcrowds: headless runner, acceptance verifier and interactive server.
//
//   mcrowds run    --preset fig2_hetero --ticks 1500 --seed 7 --metrics-at 150,450,1500 --hash
//   mcrowds verify --seeds 10
//   mcrowds serve  --preset scenario2 --bind 127.0.0.1:7777
//   mcrowds serve  --replay trace.jsonl --hash
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage error.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "mcrowds/metrics.hpp"
#include "mcrowds/scenario.hpp"
#include "mcrowds/server.hpp"
#include "mcrowds/session.hpp"
#include "mcrowds/simulation.hpp"
#include "mcrowds/trace.hpp"
#include "mcrowds/verify.hpp"

namespace fs = std::filesystem;
using namespace mcrowds;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("MARKER_CROWDS_OUT"); env && *env) return env;
  return ".";
}

struct RunArgs {
  std::string preset;
  std::string config;
  std::string trace;
  std::optional<std::int64_t> ticks;
  std::optional<std::uint64_t> seed;
  std::string out = default_out_dir();
  std::vector<std::int64_t> metrics_at;
  bool hash = false;
};

int cmd_run(const RunArgs& args) {
  const int sources = !args.preset.empty() + !args.config.empty() + !args.trace.empty();
  if (sources != 1) throw UsageError("run needs exactly one of --preset, --config or --trace");

  std::optional<InputTrace> trace;
  ScenarioConfig config;
  if (!args.trace.empty()) {
    trace = load_trace(args.trace);
    config = trace->scenario;
  } else if (!args.preset.empty()) {
    config = preset(args.preset);
  } else {
    config = load_config_file(args.config);
  }
  if (args.seed) config.seed = *args.seed;
  if (trace) trace->scenario = config;

  const std::int64_t ticks = args.ticks.value_or(trace ? trace->ticks : config.n_ticks);
  if (ticks < 0) throw UsageError("--ticks must be >= 0");
  std::vector<std::int64_t> metric_ticks = args.metrics_at;
  if (metric_ticks.empty()) metric_ticks.push_back(ticks);
  for (std::int64_t t : metric_ticks) {
    if (t < 0 || t > ticks)
      throw UsageError("--metrics-at tick " + std::to_string(t) + " outside [0, " + std::to_string(ticks) + "]");
  }

  const auto frames = run(config, ticks, trace ? &*trace : nullptr);

  fs::create_directories(args.out);
  const std::string traj_path = (fs::path(args.out) / "trajectory.jsonl").string();
  const std::string metrics_path = (fs::path(args.out) / "metrics.csv").string();
  export_trajectories(frames, traj_path, {config.name, config.seed});

  std::vector<MetricsRow> rows;
  for (std::int64_t t : metric_ticks) {
    for (const GroupMetrics& g : compute_all_groups(frames[static_cast<std::size_t>(t)], config))
      rows.push_back({t, g});
  }
  write_metrics_csv(rows, metrics_path);

  if (args.hash) std::cout << state_hash(frames) << "\n";
  std::cerr << "wrote " << traj_path << " (" << frames.size() << " frames) and " << metrics_path << "\n";
  return 0;
}

int cmd_verify(const BatteryOptions& opts) {
  if (opts.seeds < 1) throw UsageError("--seeds must be >= 1");
  bool all = true;
  for (const CheckResult& r : run_battery(opts)) {
    all = all && r.passed;
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.seconds << " s): " << r.detail << "\n";
  }
  std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? 0 : kExitFailure;
}

struct ServeArgs {
  std::string preset;
  std::string config;
  std::string bind = "127.0.0.1:7777";
  std::string replay;
  bool hash = false;
  std::string out;
};

int cmd_serve(const ServeArgs& args) {
  if (!args.replay.empty()) {
    const InputTrace trace = load_trace(args.replay);
    const auto frames = replay_session(trace);
    if (!args.out.empty()) {
      fs::create_directories(args.out);
      export_trajectories(frames, (fs::path(args.out) / "trajectory.jsonl").string(),
                          {trace.scenario.name, trace.scenario.seed});
    }
    if (args.hash) std::cout << state_hash(frames) << "\n";
    std::cerr << "replayed " << frames.size() << " frames\n";
    return 0;
  }

  if (!args.preset.empty() && !args.config.empty()) throw UsageError("give --preset or --config, not both");
  ScenarioConfig config = !args.config.empty() ? load_config_file(args.config)
                                               : preset(args.preset.empty() ? "scenario1" : args.preset);
  if (config.avatar_mode == AvatarMode::None) throw UsageError("serve needs a scenario with an avatar_mode");

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(config, args.bind);
  std::cout << "serving " << config.name << " on port " << server.port() << std::endl;
  std::thread loop([&] { server.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  loop.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marker-based crowd simulation: run, verify, serve"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario headless and write trajectories and metrics");
  run_cmd->add_option("--preset", run_args.preset, "Built-in scenario")
      ->check(CLI::IsMember(preset_names()));
  run_cmd->add_option("--config", run_args.config, "Scenario JSON file")->check(CLI::ExistingFile);
  run_cmd->add_option("--trace", run_args.trace, "Avatar input trace (carries its own scenario)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--ticks", run_args.ticks, "Number of steps (default: scenario n_ticks)");
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--out", run_args.out, "Output directory (default: $MARKER_CROWDS_OUT or .)");
  run_cmd->add_option("--metrics-at", run_args.metrics_at, "Ticks to compute group metrics at")->delimiter(',');
  run_cmd->add_flag("--hash", run_args.hash, "Print the trajectory state hash to stdout");

  BatteryOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance battery");
  verify_cmd->add_option("--seeds", verify_opts.seeds, "Seeds per ordering check")->capture_default_str();
  verify_cmd->add_option("--first-seed", verify_opts.first_seed, "First seed")->capture_default_str();
  verify_cmd->add_option("--jobs", verify_opts.jobs, "Parallel workers")->capture_default_str();

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Host an interactive session over TCP");
  serve_cmd->add_option("--preset", serve_args.preset, "Built-in scenario (default scenario1)")
      ->check(CLI::IsMember(preset_names()));
  serve_cmd->add_option("--config", serve_args.config, "Scenario JSON file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--bind", serve_args.bind, "host:port")->capture_default_str();
  serve_cmd->add_option("--replay", serve_args.replay, "Drive a session from a trace file instead of a socket")
      ->check(CLI::ExistingFile);
  serve_cmd->add_flag("--hash", serve_args.hash, "With --replay: print the state hash");
  serve_cmd->add_option("--out", serve_args.out, "With --replay: directory for trajectory.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*verify_cmd) return cmd_verify(verify_opts);
    if (*serve_cmd) return cmd_serve(serve_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
