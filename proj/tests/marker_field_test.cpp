#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "mcrowds/marker_field.hpp"

using namespace mcrowds;

namespace {

const Rect kTen{{0, 0}, {10, 10}};

}  // namespace

TEST(MarkerField, TenByTenAtDensitySix) {
  const MarkerField f = generate_markers(kTen, {}, 6.0, 42);
  EXPECT_EQ(f.size(), 600u);  // round(6 * 100) samples, nothing rejected
  for (const Marker& m : f.markers()) EXPECT_TRUE(kTen.contains(m.position)) << m.position.x << "," << m.position.y;
  EXPECT_EQ(f.density(), 6.0);
  EXPECT_EQ(f.seed(), 42u);
}

TEST(MarkerField, IdsAreIndices) {
  const MarkerField f = generate_markers(kTen, {}, 6.0, 1);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f.markers()[i].id, static_cast<int>(i));
}

TEST(MarkerField, RoughlyUniform) {
  // Four quadrants of 150 expected each; a binomial(600, 1/4) has sd ~10.6,
  // so 5 sd is a loose bound that still catches a biased sampler.
  const MarkerField f = generate_markers(kTen, {}, 6.0, 42);
  int q[4] = {0, 0, 0, 0};
  for (const Marker& m : f.markers()) ++q[(m.position.x >= 5.0) + 2 * (m.position.y >= 5.0)];
  for (int n : q) EXPECT_NEAR(n, 150, 53);
}

TEST(MarkerField, ObstaclesAreEmpty) {
  const Polygon block{{2, 2}, {8, 2}, {8, 8}, {2, 8}};
  const MarkerField f = generate_markers(kTen, {block}, 6.0, 3);
  for (const Marker& m : f.markers()) EXPECT_FALSE(point_in_polygon(block, m.position));
  // Expected 6 * 64 free area; allow 5 binomial sd.
  const double p = 64.0 / 100.0;
  const double sd = std::sqrt(600 * p * (1 - p));
  EXPECT_NEAR(static_cast<double>(f.size()), 600 * p, 5 * sd);
}

TEST(MarkerField, FullyBlockedIsAnError) {
  const Polygon cover{{-1, -1}, {11, -1}, {11, 11}, {-1, 11}};
  EXPECT_THROW(generate_markers(kTen, {cover}, 6.0, 1), EmptyFieldError);
}

TEST(MarkerField, BadArguments) {
  EXPECT_THROW(generate_markers(kTen, {}, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(generate_markers(kTen, {}, -2.0, 1), std::invalid_argument);
  EXPECT_THROW(generate_markers({{0, 0}, {0, 5}}, {}, 6.0, 1), std::invalid_argument);
}

TEST(MarkerField, SameInputsSameMarkers) {
  const Polygon tri{{1, 1}, {4, 1}, {1, 4}};
  const auto a = generate_markers(kTen, {tri}, 6.0, 99);
  const auto b = generate_markers(kTen, {tri}, 6.0, 99);
  EXPECT_EQ(a.markers(), b.markers());
  const auto c = generate_markers(kTen, {tri}, 6.0, 100);
  EXPECT_NE(a.markers(), c.markers());
}

TEST(SpatialGrid, EveryMarkerInExactlyOneCell) {
  for (double cell : {0.7, 2.0, 3.0, 25.0}) {
    const MarkerField f = generate_markers({{-3, 2}, {9.5, 8}}, {}, 6.0, 5, cell);
    std::map<int, int> seen;
    const SpatialGrid& g = f.index();
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.columns(); ++c)
        for (int id : g.cell(c, r)) ++seen[id];
    ASSERT_EQ(seen.size(), f.size()) << "cell " << cell;
    for (const auto& [id, n] : seen) EXPECT_EQ(n, 1) << "marker " << id;
  }
}

TEST(SpatialGrid, EdgeMarkersClampIntoLastCell) {
  const std::vector<Marker> ms{{0, {0, 0}}, {1, {10, 10}}, {2, {10, 0}}};
  const MarkerField f(kTen, ms, 2.5);
  EXPECT_EQ(f.index().columns(), 4);
  EXPECT_EQ(f.index().cell(3, 3), (std::vector<int>{1}));
  EXPECT_EQ(f.index().cell(3, 0), (std::vector<int>{2}));
  EXPECT_EQ(f.index().cell(0, 0), (std::vector<int>{0}));
}

TEST(SpatialGrid, CandidatesCoverTheDisc) {
  // Property: every marker within the query radius is offered as a candidate,
  // including radii larger than a cell.
  const MarkerField f = generate_markers(kTen, {}, 6.0, 11, 1.5);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> pos(-1.0, 11.0), rad(0.1, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 p{pos(gen), pos(gen)};
    const double r = rad(gen);
    std::set<int> offered;
    f.index().for_each_candidate(p, r, [&](int id) { offered.insert(id); });
    for (const Marker& m : f.markers()) {
      if (distance(m.position, p) <= r) {
        ASSERT_TRUE(offered.count(m.id)) << "trial " << trial;
      }
    }
  }
}
