#include "mcrowds/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcrowds/random.hpp"

namespace mcrowds {

using nlohmann::json;

std::string_view to_string(AvatarMode m) {
  switch (m) {
    case AvatarMode::None: return "None";
    case AvatarMode::Spectator: return "Spectator";
    case AvatarMode::CompetingAgent: return "CompetingAgent";
  }
  return "?";
}

int ScenarioConfig::agent_count() const {
  int n = 0;
  for (const auto& g : spawn_groups) n += g.count;
  return n;
}

Vec2 ScenarioConfig::goal_for_label(std::string_view label) const {
  for (const auto& g : spawn_groups) {
    if (g.profile_label == label) return goals.at(static_cast<std::size_t>(g.goal_index));
  }
  throw std::invalid_argument("no spawn group labelled '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

bool in_obstacle(const ScenarioConfig& c, Vec2 p) {
  return std::any_of(c.obstacles.begin(), c.obstacles.end(),
                     [&](const Polygon& o) { return point_in_polygon(o, p); });
}

Rect region_bounds(const SpawnRegion& r) {
  if (r.shape == SpawnRegion::Shape::Rect) return r.rect;
  return {r.center - Vec2{r.radius, r.radius}, r.center + Vec2{r.radius, r.radius}};
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.schema_version == kSchemaVersion, "schema_version",
          "unsupported schema version " + std::to_string(c.schema_version) + " (expected 1)");
  require(!c.world.degenerate(), "world", "world bounds must have positive width and height");
  for (std::size_t i = 0; i < c.obstacles.size(); ++i)
    require(c.obstacles[i].size() >= 3, index_path("obstacles", i), "polygon needs at least 3 vertices");
  require(std::isfinite(c.marker_density) && c.marker_density > 0.0, "marker_density", "must be > 0");
  require(std::isfinite(c.dt) && c.dt > 0.0, "dt", "must be > 0");
  require(c.mode.marker_cap >= 1, "mode.marker_cap", "must be >= 1");
  require(c.n_ticks >= 0, "n_ticks", "must be >= 0");

  require(!c.goals.empty(), "goals", "at least one goal is required");
  for (std::size_t i = 0; i < c.goals.size(); ++i) {
    const auto path = index_path("goals", i);
    require(c.world.contains(c.goals[i]), path, "goal lies outside the world");
    require(!in_obstacle(c, c.goals[i]), path, "goal lies inside an obstacle");
  }

  require(!c.spawn_groups.empty(), "spawn_groups", "at least one spawn group is required");
  for (std::size_t i = 0; i < c.spawn_groups.size(); ++i) {
    const SpawnGroup& g = c.spawn_groups[i];
    const auto path = index_path("spawn_groups", i);
    require(g.count >= 1, path + ".count", "must be >= 1");
    require(g.extraversion >= 0.0 && g.extraversion <= 1.0, path + ".extraversion",
            "must lie in [0, 1], got " + std::to_string(g.extraversion));
    require(g.capture_radius > 0.0, path + ".capture_radius", "must be > 0");
    require(g.max_speed > 0.0, path + ".max_speed", "must be > 0");
    require(g.goal_index >= 0 && static_cast<std::size_t>(g.goal_index) < c.goals.size(),
            path + ".goal_index", "does not name an entry of goals");
    require(!g.profile_label.empty(), path + ".profile_label", "must not be empty");
    const SpawnRegion& r = g.region;
    if (r.shape == SpawnRegion::Shape::Rect) {
      require(!r.rect.degenerate(), path + ".region", "rectangle must have positive extent");
    } else {
      require(r.radius > 0.0, path + ".region.radius", "must be > 0");
      require(r.inner_radius >= 0.0 && r.inner_radius < r.radius, path + ".region.inner_radius",
              "must satisfy 0 <= inner_radius < radius");
    }
    require(c.world.contains(region_bounds(r)), path + ".region", "spawn region extends outside the world");
    for (std::size_t k = 0; k < c.obstacles.size(); ++k) {
      const bool overlaps = r.shape == SpawnRegion::Shape::Rect
                                ? rect_overlaps_polygon(r.rect, c.obstacles[k])
                                : circle_overlaps_polygon(r.center, r.radius, c.obstacles[k]);
      require(!overlaps, path + ".region", "spawn region overlaps obstacles[" + std::to_string(k) + "]");
    }
  }

  if (c.avatar_mode != AvatarMode::None) {
    require(c.world.contains(c.avatar.position), "avatar.position", "avatar lies outside the world");
    require(!in_obstacle(c, c.avatar.position), "avatar.position", "avatar lies inside an obstacle");
    require(c.avatar.max_speed > 0.0, "avatar.max_speed", "must be > 0");
    require(c.avatar.capture_radius > 0.0, "avatar.capture_radius", "must be > 0");
    require(c.avatar.extraversion >= 0.0 && c.avatar.extraversion <= 1.0, "avatar.extraversion",
            "must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// JSON parsing

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : obj_(j), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const json* optional(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* j = optional(key);
    if (!j) throw ConfigError(child(key), "missing required field");
    return *j;
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(child(item.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

int as_int(const json& j, const std::string& path) {
  const auto v = as_integer(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(path, "integer out of range");
  return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Vec2 as_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a point [x, y]");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

Rect as_rect(ObjectReader& r) {
  return {as_point(r.required("min"), r.child("min")), as_point(r.required("max"), r.child("max"))};
}

template <class T, class Fn>
void read_optional(ObjectReader& r, const std::string& key, T& out, Fn convert) {
  if (const json* j = r.optional(key)) out = convert(*j, r.child(key));
}

SpawnRegion parse_region(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string shape = as_string(r.required("shape"), r.child("shape"));
  SpawnRegion region;
  if (shape == "rect") {
    region = SpawnRegion::make_rect(as_rect(r));
  } else if (shape == "circle") {
    region.shape = SpawnRegion::Shape::Circle;
    region.center = as_point(r.required("center"), r.child("center"));
    region.radius = as_number(r.required("radius"), r.child("radius"));
    read_optional(r, "inner_radius", region.inner_radius, as_number);
  } else {
    throw ConfigError(r.child("shape"), "unknown region shape '" + shape + "' (expected rect or circle)");
  }
  r.finish();
  return region;
}

SpawnGroup parse_group(const json& j, const std::string& path, std::size_t index) {
  ObjectReader r(j, path);
  SpawnGroup g;
  g.count = as_int(r.required("count"), r.child("count"));
  g.region = parse_region(r.required("region"), r.child("region"));
  g.profile_label = "group" + std::to_string(index);
  read_optional(r, "extraversion", g.extraversion, as_number);
  read_optional(r, "profile_label", g.profile_label, as_string);
  read_optional(r, "goal_index", g.goal_index, as_int);
  read_optional(r, "capture_radius", g.capture_radius, as_number);
  read_optional(r, "max_speed", g.max_speed, as_number);
  r.finish();
  return g;
}

AvatarMode avatar_mode_from(const std::string& s, const std::string& path) {
  if (s == "None") return AvatarMode::None;
  if (s == "Spectator") return AvatarMode::Spectator;
  if (s == "CompetingAgent") return AvatarMode::CompetingAgent;
  throw ConfigError(path, "unknown avatar mode '" + s + "' (expected None, Spectator or CompetingAgent)");
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed scenario document: ") + e.what());
  }

  ObjectReader root(doc, "");
  ScenarioConfig c;
  read_optional(root, "schema_version", c.schema_version, as_int);
  read_optional(root, "name", c.name, as_string);
  {
    ObjectReader w(root.required("world"), "world");
    c.world = as_rect(w);
    w.finish();
  }
  if (const json* obs = root.optional("obstacles")) {
    if (!obs->is_array()) throw ConfigError("obstacles", "expected an array of polygons");
    for (std::size_t i = 0; i < obs->size(); ++i) {
      const auto path = index_path("obstacles", i);
      const json& poly = (*obs)[i];
      if (!poly.is_array()) throw ConfigError(path, "expected an array of points");
      Polygon p;
      for (std::size_t k = 0; k < poly.size(); ++k) p.push_back(as_point(poly[k], index_path(path, k)));
      c.obstacles.push_back(std::move(p));
    }
  }
  read_optional(root, "marker_density", c.marker_density, as_number);
  if (const json* s = root.optional("seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  read_optional(root, "dt", c.dt, as_number);
  if (const json* m = root.optional("mode")) {
    ObjectReader mr(*m, "mode");
    if (const json* v = mr.optional("variant")) {
      try {
        c.mode.variant = behavior_variant_from_string(as_string(*v, "mode.variant"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("mode.variant", e.what());
      }
    }
    read_optional(mr, "marker_cap", c.mode.marker_cap, as_int);
    mr.finish();
  }
  {
    const json& groups = root.required("spawn_groups");
    if (!groups.is_array()) throw ConfigError("spawn_groups", "expected an array");
    for (std::size_t i = 0; i < groups.size(); ++i)
      c.spawn_groups.push_back(parse_group(groups[i], index_path("spawn_groups", i), i));
  }
  {
    const json& goals = root.required("goals");
    if (!goals.is_array()) throw ConfigError("goals", "expected an array of points");
    for (std::size_t i = 0; i < goals.size(); ++i) c.goals.push_back(as_point(goals[i], index_path("goals", i)));
  }
  if (const json* m = root.optional("avatar_mode")) c.avatar_mode = avatar_mode_from(as_string(*m, "avatar_mode"), "avatar_mode");
  c.avatar.position = (c.world.min + c.world.max) * 0.5;
  if (const json* a = root.optional("avatar")) {
    ObjectReader ar(*a, "avatar");
    read_optional(ar, "position", c.avatar.position, as_point);
    read_optional(ar, "max_speed", c.avatar.max_speed, as_number);
    read_optional(ar, "capture_radius", c.avatar.capture_radius, as_number);
    read_optional(ar, "extraversion", c.avatar.extraversion, as_number);
    ar.finish();
  }
  read_optional(root, "n_ticks", c.n_ticks, as_integer);
  root.finish();

  validate(c);
  return c;
}

std::string render_config(const ScenarioConfig& c) {
  json doc;
  doc["schema_version"] = c.schema_version;
  doc["name"] = c.name;
  doc["world"] = {{"min", point_json(c.world.min)}, {"max", point_json(c.world.max)}};
  doc["obstacles"] = json::array();
  for (const auto& poly : c.obstacles) {
    json p = json::array();
    for (const Vec2& v : poly) p.push_back(point_json(v));
    doc["obstacles"].push_back(std::move(p));
  }
  doc["marker_density"] = c.marker_density;
  doc["seed"] = c.seed;
  doc["dt"] = c.dt;
  doc["mode"] = {{"variant", std::string(to_string(c.mode.variant))}, {"marker_cap", c.mode.marker_cap}};
  doc["spawn_groups"] = json::array();
  for (const auto& g : c.spawn_groups) {
    json region;
    if (g.region.shape == SpawnRegion::Shape::Rect) {
      region = {{"shape", "rect"}, {"min", point_json(g.region.rect.min)}, {"max", point_json(g.region.rect.max)}};
    } else {
      region = {{"shape", "circle"},
                {"center", point_json(g.region.center)},
                {"radius", g.region.radius},
                {"inner_radius", g.region.inner_radius}};
    }
    doc["spawn_groups"].push_back({{"count", g.count},
                                   {"region", std::move(region)},
                                   {"extraversion", g.extraversion},
                                   {"profile_label", g.profile_label},
                                   {"goal_index", g.goal_index},
                                   {"capture_radius", g.capture_radius},
                                   {"max_speed", g.max_speed}});
  }
  doc["goals"] = json::array();
  for (const Vec2& g : c.goals) doc["goals"].push_back(point_json(g));
  doc["avatar_mode"] = std::string(to_string(c.avatar_mode));
  doc["avatar"] = {{"position", point_json(c.avatar.position)},
                   {"max_speed", c.avatar.max_speed},
                   {"capture_radius", c.avatar.capture_radius},
                   {"extraversion", c.avatar.extraversion}};
  doc["n_ticks"] = c.n_ticks;
  return doc.dump(2) + "\n";
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Presets

namespace {

constexpr Vec2 kFigureGoal{15.0, 15.0};

// Fifty agents on an annulus around a single goal in a 30 x 30 m world.
ScenarioConfig figure_base(std::string name, BehaviorVariant variant) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.world = {{0.0, 0.0}, {30.0, 30.0}};
  c.seed = 7;
  c.mode.variant = variant;
  c.goals = {kFigureGoal};
  c.n_ticks = 1500;
  return c;
}

SpawnGroup ring_group(int count, double extraversion, std::string label) {
  SpawnGroup g;
  g.count = count;
  g.region = SpawnRegion::make_circle(kFigureGoal, 13.0, 8.0);
  g.extraversion = extraversion;
  g.profile_label = std::move(label);
  return g;
}

// Corridor approximation of the interactive scenes: agents enter on the left
// and walk to a goal on the right; the avatar starts mid-corridor.
ScenarioConfig corridor_base(std::string name, BehaviorVariant variant, AvatarMode avatar_mode) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.world = {{0.0, 0.0}, {40.0, 14.0}};
  c.seed = 7;
  c.mode.variant = variant;
  c.goals = {{36.0, 7.0}};
  for (auto [e, label] : {std::pair{1.0, "E1.0"}, std::pair{0.8, "E0.8"}}) {
    SpawnGroup g;
    g.count = 15;
    g.region = SpawnRegion::make_rect({{2.0, 2.0}, {12.0, 12.0}});
    g.extraversion = e;
    g.profile_label = label;
    c.spawn_groups.push_back(g);
  }
  c.avatar_mode = avatar_mode;
  c.avatar.position = {22.0, 7.0};
  c.n_ticks = 1500;
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2_hetero",      "fig3_homo_e08", "fig4_normal_life",
                                              "fig5_biocrowds",   "scenario1",     "scenario2",
                                              "scenario3"};
  return names;
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "fig2_hetero") {
    c = figure_base("fig2_hetero", BehaviorVariant::Extraversion);
    c.spawn_groups = {ring_group(25, 1.0, "E1.0"), ring_group(25, 0.8, "E0.8")};
  } else if (name == "fig3_homo_e08") {
    c = figure_base("fig3_homo_e08", BehaviorVariant::Extraversion);
    c.spawn_groups = {ring_group(50, 0.8, "E0.8")};
  } else if (name == "fig4_normal_life") {
    c = figure_base("fig4_normal_life", BehaviorVariant::NormalLife);
    c.spawn_groups = {ring_group(50, 1.0, "normal_life")};
  } else if (name == "fig5_biocrowds") {
    c = figure_base("fig5_biocrowds", BehaviorVariant::BioCrowds);
    c.spawn_groups = {ring_group(50, 1.0, "biocrowds")};
  } else if (name == "scenario1") {
    c = corridor_base("scenario1", BehaviorVariant::Extraversion, AvatarMode::Spectator);
  } else if (name == "scenario2") {
    c = corridor_base("scenario2", BehaviorVariant::BioCrowds, AvatarMode::CompetingAgent);
  } else if (name == "scenario3") {
    c = corridor_base("scenario3", BehaviorVariant::Extraversion, AvatarMode::CompetingAgent);
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// State construction

Participation avatar_participation(const ScenarioConfig& c) {
  if (c.avatar_mode != AvatarMode::CompetingAgent) return Participation::Spectator;
  return c.mode.variant == BehaviorVariant::BioCrowds ? Participation::BioCrowdsAgent
                                                      : Participation::NormalLifeAgent;
}

namespace {

constexpr double kSpawnSpacing = 0.6;
constexpr int kSpawnAttempts = 500;

Vec2 sample_region(const SpawnRegion& r, std::mt19937_64& gen) {
  if (r.shape == SpawnRegion::Shape::Rect)
    return {uniform(gen, r.rect.min.x, r.rect.max.x), uniform(gen, r.rect.min.y, r.rect.max.y)};
  const double u = uniform01(gen);
  const double angle = 2.0 * std::numbers::pi * uniform01(gen);
  const double inner_sq = r.inner_radius * r.inner_radius;
  const double rho = std::sqrt(inner_sq + u * (r.radius * r.radius - inner_sq));
  return r.center + Vec2{rho * std::cos(angle), rho * std::sin(angle)};
}

}  // namespace

SimState build_state(const ScenarioConfig& config) {
  validate(config);
  SimState state;
  state.dt = config.dt;
  state.mode = config.mode;

  double cell = config.avatar.capture_radius;
  for (const auto& g : config.spawn_groups) cell = std::max(cell, g.capture_radius);
  state.marker_field = std::make_shared<const MarkerField>(
      generate_markers(config.world, config.obstacles, config.marker_density, config.seed, cell));

  std::mt19937_64 gen(derive_seed(config.seed, streams::kSpawns));
  int next_id = 0;
  for (const auto& g : config.spawn_groups) {
    for (int k = 0; k < g.count; ++k) {
      Vec2 chosen{};
      bool have_free = false;
      for (int attempt = 0; attempt < kSpawnAttempts; ++attempt) {
        const Vec2 p = sample_region(g.region, gen);
        if (!config.world.contains(p) || in_obstacle(config, p)) continue;
        chosen = p;
        have_free = true;
        const bool spaced = std::none_of(state.agents.begin(), state.agents.end(), [&](const Agent& a) {
          return distance_sq(a.position, p) < kSpawnSpacing * kSpawnSpacing;
        });
        if (spaced) break;
      }
      if (!have_free) throw ConfigError("spawn_groups", "could not place an agent in free space");
      Agent a;
      a.id = next_id++;
      a.position = chosen;
      a.goal = config.goals[static_cast<std::size_t>(g.goal_index)];
      a.capture_radius = g.capture_radius;
      a.max_speed = g.max_speed;
      a.extraversion = g.extraversion;
      a.profile_label = g.profile_label;
      state.agents.push_back(std::move(a));
    }
  }

  if (config.avatar_mode != AvatarMode::None) {
    Avatar av;
    av.position = config.avatar.position;
    av.max_speed = config.avatar.max_speed;
    av.capture_radius = config.avatar.capture_radius;
    av.extraversion = config.avatar.extraversion;
    av.participation = avatar_participation(config);
    state.avatar = av;
  }

  refresh_assignments(state);
  return state;
}

}  // namespace mcrowds
