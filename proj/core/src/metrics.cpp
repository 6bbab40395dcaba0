#include "mcrowds/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <openssl/evp.h>

#include "json_codec.hpp"

namespace mcrowds {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

double convex_hull_area(std::span<const Vec2> points) {
  if (points.size() < 3) return 0.0;
  const auto hull = convex_hull({points.begin(), points.end()});
  if (hull.size() < 3) return 0.0;
  return polygon_area(hull);
}

GroupMetrics compute_group_metrics(const FrameRecord& frame, std::string_view label, Vec2 goal) {
  std::vector<Vec2> pts;
  for (const AgentRecord& a : frame.agents)
    if (a.profile_label == label) pts.push_back(a.position);
  if (pts.empty()) throw std::invalid_argument("no agents labelled '" + std::string(label) + "' in frame");

  GroupMetrics m;
  m.profile_label = std::string(label);
  m.n_agents = static_cast<int>(pts.size());
  const std::size_t n = pts.size();

  double goal_sum = 0.0;
  for (const Vec2& p : pts) goal_sum += distance(p, goal);
  m.mean_dist_to_goal = goal_sum / static_cast<double>(n);

  if (n >= 2) {
    double pair_sum = 0.0;
    double nn_sum = 0.0;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = distance(pts[i], pts[j]);
        pair_sum += d;
        nearest[i] = std::min(nearest[i], d);
        nearest[j] = std::min(nearest[j], d);
      }
    }
    for (double d : nearest) nn_sum += d;
    m.mean_intra_pairwise_dist = pair_sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
    m.mean_nearest_neighbor_dist = nn_sum / static_cast<double>(n);
  }
  m.convex_hull_area = convex_hull_area(pts);
  return m;
}

std::vector<GroupMetrics> compute_all_groups(const FrameRecord& frame, const ScenarioConfig& config) {
  std::vector<GroupMetrics> out;
  std::vector<std::string> done;
  for (const SpawnGroup& g : config.spawn_groups) {
    if (std::find(done.begin(), done.end(), g.profile_label) != done.end()) continue;
    done.push_back(g.profile_label);
    out.push_back(compute_group_metrics(frame, g.profile_label,
                                        config.goals.at(static_cast<std::size_t>(g.goal_index))));
  }
  return out;
}

void export_trajectories(std::span<const FrameRecord> frames, const std::string& path,
                         const TrajectoryMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open trajectory file '" + path + "' for writing");
  detail::ojson header;
  header["schema"] = "mcrowds.trajectory";
  header["version"] = kTrajectorySchemaVersion;
  header["scenario"] = meta.scenario;
  header["seed"] = meta.seed;
  header["frames"] = frames.size();
  out << header.dump() << '\n';
  for (const FrameRecord& f : frames) out << detail::frame_object(f).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed for trajectory file '" + path + "'");
}

std::vector<FrameRecord> read_trajectories(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read trajectory file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory file '" + path + "' has no header");
  const auto header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("schema", "") != "mcrowds.trajectory" ||
      header.value("version", 0) != kTrajectorySchemaVersion)
    throw std::runtime_error("trajectory file '" + path + "' has an unrecognized header");
  std::vector<FrameRecord> frames;
  while (std::getline(in, line)) {
    if (!line.empty()) frames.push_back(frame_from_json(line));
  }
  return frames;
}

namespace {

constexpr double kHashQuantum = 1e-6;

void append_quantized(std::string& s, double v) {
  const long long q = std::llround(v / kHashQuantum);
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), q);
  s.append(buf.data(), end);
}

void append_int(std::string& s, long long v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  s.append(buf.data(), end);
}

void append_double(std::string& s, double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  s.append(buf.data(), end);
}

}  // namespace

std::string state_hash(std::span<const FrameRecord> frames) {
  std::string canon;
  for (const FrameRecord& f : frames) {
    canon += 't';
    append_int(canon, f.tick);
    for (const AgentRecord& a : f.agents) {
      canon += '|';
      append_int(canon, a.id);
      canon += ':';
      append_quantized(canon, a.position.x);
      canon += ',';
      append_quantized(canon, a.position.y);
    }
    if (f.avatar) {
      canon += "|a:";
      append_quantized(canon, f.avatar->position.x);
      canon += ',';
      append_quantized(canon, f.avatar->position.y);
    }
    canon += '\n';
  }

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

void write_metrics_csv(std::span<const MetricsRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open metrics file '" + path + "' for writing");
  out << kMetricsCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    std::string line;
    append_int(line, r.tick);
    line += ',' + r.metrics.profile_label + ',';
    append_int(line, r.metrics.n_agents);
    for (double v : {r.metrics.mean_dist_to_goal, r.metrics.mean_intra_pairwise_dist, r.metrics.convex_hull_area,
                     r.metrics.mean_nearest_neighbor_dist}) {
      line += ',';
      append_double(line, v);
    }
    out << line << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for metrics file '" + path + "'");
}

}  // namespace mcrowds
