#include "mcrowds/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mcrowds {

using nlohmann::json;

Vec2 InputTrace::input_at(std::int64_t tick) const {
  // Entries are kept sorted by tick (stable), so the last entry with
  // entry.tick <= tick is the one in effect.
  auto it = std::upper_bound(inputs.begin(), inputs.end(), tick,
                             [](std::int64_t t, const TraceInput& in) { return t < in.tick; });
  if (it == inputs.begin()) return {};
  return std::prev(it)->dir;
}

InputTrace parse_trace(std::string_view text) {
  InputTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "trace line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError(where, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    try {
      if (!have_header) {
        if (j.value("schema", "") != "mcrowds.trace") throw ConfigError(where, "missing trace header");
        if (j.value("version", 0) != kTraceSchemaVersion) throw ConfigError(where, "unsupported trace version");
        if (j.contains("preset")) {
          trace.scenario = preset(j.at("preset").get<std::string>());
        } else if (j.contains("config")) {
          trace.scenario = parse_config(j.at("config").dump());
        } else {
          throw ConfigError(where, "header needs \"preset\" or \"config\"");
        }
        if (j.contains("seed")) trace.scenario.seed = j.at("seed").get<std::uint64_t>();
        trace.ticks = j.value("ticks", trace.scenario.n_ticks);
        if (trace.ticks < 0) throw ConfigError(where + ".ticks", "must be >= 0");
        have_header = true;
      } else {
        trace.inputs.push_back({j.at("tick").get<std::int64_t>(), {j.at("dx").get<double>(), j.at("dy").get<double>()}});
      }
    } catch (const json::exception& e) {
      throw ConfigError(where, e.what());
    }
  }
  if (!have_header) throw ConfigError("trace", "empty trace (no header)");
  std::stable_sort(trace.inputs.begin(), trace.inputs.end(),
                   [](const TraceInput& a, const TraceInput& b) { return a.tick < b.tick; });
  return trace;
}

InputTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::string render_trace(const InputTrace& trace) {
  nlohmann::ordered_json header;
  header["schema"] = "mcrowds.trace";
  header["version"] = kTraceSchemaVersion;
  header["config"] = json::parse(render_config(trace.scenario));
  header["ticks"] = trace.ticks;
  std::string out = header.dump() + "\n";
  for (const TraceInput& in : trace.inputs) {
    nlohmann::ordered_json j;
    j["tick"] = in.tick;
    j["dx"] = in.dir.x;
    j["dy"] = in.dir.y;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace mcrowds
