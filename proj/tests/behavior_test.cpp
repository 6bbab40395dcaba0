#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcrowds/behavior.hpp"

using namespace mcrowds;

namespace {

// Reference kernel from angles rather than dot products.
double oracle_f(Vec2 goal, Vec2 offset) {
  const double d = std::hypot(offset.x, offset.y);
  const double theta = std::atan2(offset.y, offset.x) - std::atan2(goal.y, goal.x);
  return (1.0 + std::cos(theta)) / (1.0 + d);
}

std::vector<WeightedMarker> markers_at(std::initializer_list<Vec2> offsets) {
  std::vector<WeightedMarker> out;
  int id = 0;
  for (Vec2 o : offsets) out.push_back({id++, o, 0.0});
  return out;
}

std::vector<WeightedMarker> random_markers(std::mt19937_64& gen, int n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<WeightedMarker> out;
  for (int k = 0; k < n; ++k) out.push_back({k, {u(gen), u(gen)}, 0.0});
  return out;
}

double weight_sum(const std::vector<WeightedMarker>& ms) {
  double s = 0.0;
  for (const auto& m : ms) s += m.weight;
  return s;
}

}  // namespace

TEST(Kernel, SpotValues) {
  EXPECT_NEAR(kernel_f({1, 0}, {1, 0}), 1.0, 1e-15);
  EXPECT_NEAR(kernel_f({1, 0}, {-1, 0}), 0.0, 1e-15);
  EXPECT_NEAR(kernel_f({1, 0}, {0, 3}), 0.25, 1e-15);
}

TEST(Kernel, DegenerateInputs) {
  EXPECT_EQ(kernel_f({1, 0}, {0, 0}), 2.0);       // marker under the agent counts as aligned
  EXPECT_NEAR(kernel_f({0, 0}, {3, 0}), 0.25, 1e-15);  // no goal direction: 1 / (1 + d)
}

TEST(Kernel, MatchesAngleOracle) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 g{u(gen), u(gen)}, o{u(gen), u(gen)};
    EXPECT_NEAR(kernel_f(g, o), oracle_f(g, o), 1e-12);
  }
}

TEST(Kernel, ScaleInvariantInGoalDirection) {
  EXPECT_NEAR(kernel_f({1, 1}, {0.3, -1.2}), kernel_f({40, 40}, {0.3, -1.2}), 1e-15);
}

TEST(BioCrowdsWeights, SingleMarkerGetsEverything) {
  for (Vec2 o : {Vec2{1, 0}, Vec2{-0.3, 1.7}, Vec2{0, 0}}) {
    const auto w = biocrowds_weights({1, 0}, markers_at({o}));
    ASSERT_EQ(w.size(), 1u);
    EXPECT_DOUBLE_EQ(w[0].weight, 1.0);
  }
}

TEST(BioCrowdsWeights, EqualKernelsSplitEvenly) {
  const auto w = biocrowds_weights({1, 0}, markers_at({{1, 1}, {1, -1}}));
  EXPECT_DOUBLE_EQ(w[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(w[1].weight, 0.5);
}

TEST(BioCrowdsWeights, ThreeMarkersMixedAngles) {
  const Vec2 goal{2, 1};
  const auto ms = markers_at({{1.5, 0.2}, {-0.4, 1.1}, {0.3, -1.8}});
  const double f0 = oracle_f(goal, ms[0].offset);
  const double f1 = oracle_f(goal, ms[1].offset);
  const double f2 = oracle_f(goal, ms[2].offset);
  const double total = f0 + f1 + f2;
  const auto w = biocrowds_weights(goal, ms);
  EXPECT_NEAR(w[0].weight, f0 / total, 1e-12);
  EXPECT_NEAR(w[1].weight, f1 / total, 1e-12);
  EXPECT_NEAR(w[2].weight, f2 / total, 1e-12);
  EXPECT_EQ(w[1].marker_id, 1);
  EXPECT_EQ(w[2].offset, ms[2].offset);
}

TEST(BioCrowdsWeights, AllBehindFallsBackToUniform) {
  const auto w = biocrowds_weights({1, 0}, markers_at({{-1, 0}, {-2, 0}, {-0.5, 0}, {-3, 0}}));
  for (const auto& m : w) EXPECT_DOUBLE_EQ(m.weight, 0.25);
}

TEST(BioCrowdsWeights, NormalizedAndBoundedProperty) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-9, 9);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ms = random_markers(gen, 1 + static_cast<int>(gen() % 100), 2.0);
    const auto w = biocrowds_weights({u(gen), u(gen)}, ms);
    EXPECT_NEAR(weight_sum(w), 1.0, 1e-9);
    for (const auto& m : w) {
      EXPECT_GE(m.weight, 0.0);
      EXPECT_LE(m.weight, 1.0);
    }
  }
}

TEST(BioCrowdsWeights, EmptyIn_EmptyOut) { EXPECT_TRUE(biocrowds_weights({1, 0}, {}).empty()); }

TEST(Comfort, SpotValues) {
  EXPECT_EQ(comfort(70, 70), 1.0);
  EXPECT_EQ(comfort(0, 70), 0.0);
  EXPECT_EQ(comfort(35, 70), 0.5);
  EXPECT_EQ(comfort(500, 70), 1.0);
}

TEST(Comfort, MonotoneAndBounded) {
  double prev = -1.0;
  for (int n = 0; n <= 200; ++n) {
    const double c = comfort(n, 70);
    EXPECT_GE(c, prev);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
}

TEST(ComfortBias, SpotValuesAreExact) {
  EXPECT_EQ(comfort_bias(1.0), 1.0);
  EXPECT_EQ(comfort_bias(0.0), 0.0);
  EXPECT_EQ(comfort_bias(1.0 / 3.0), 0.5);
}

TEST(ComfortBias, MatchesSineAndIsMonotone) {
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double c = i / 1000.0;
    const double b = comfort_bias(c);
    EXPECT_NEAR(b, std::sin(c * std::numbers::pi / 2.0), 1e-15);
    EXPECT_GE(b, prev);
    prev = b;
  }
}

TEST(NormalLife, SpotValues) {
  const auto base = markers_at({{1, 0}});
  auto with = [&](double w, double bias) {
    auto ms = base;
    ms[0].weight = w;
    return normal_life_weights(ms, bias)[0].weight;
  };
  EXPECT_DOUBLE_EQ(with(0.2, 1.0), 0.2);
  EXPECT_DOUBLE_EQ(with(0.2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(with(0.7, 0.0), 1.0);
  EXPECT_NEAR(with(0.2, 0.5), 0.6, 1e-15);
}

TEST(Extraversion, SpotValues) {
  auto with = [](double w, double bias, double e) {
    std::vector<WeightedMarker> ms{{0, {1, 0}, w}};
    return extraversion_weights(ms, bias, e)[0].weight;
  };
  EXPECT_DOUBLE_EQ(with(0.2, 1.0, 1.0), 0.2);
  EXPECT_NEAR(with(0.2, 0.5, 0.8), 0.18, 1e-15);
  for (double w : {0.0, 0.1, 0.9}) EXPECT_NEAR(with(w, 0.3, 0.0), 0.7, 1e-15);
}

TEST(Extraversion, IsNotRenormalized) {
  const auto base = biocrowds_weights({1, 0}, markers_at({{1, 0}, {0, 1}, {-1, 0}}));
  EXPECT_NEAR(weight_sum(extraversion_weights(base, 0.0, 0.0)), 3.0, 1e-15);
  EXPECT_NEAR(weight_sum(normal_life_weights(base, 0.0)), 3.0, 1e-15);
}

TEST(Extraversion, CollapsesToOtherModesProperty) {
  // E = 1 scales the kernel weights by bias; E = 0.5 halves Normal Life.
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto base = biocrowds_weights({u01(gen) - 0.5, u01(gen) - 0.5}, random_markers(gen, 20, 2.0));
    const double bias = u01(gen);
    const auto e1 = extraversion_weights(base, bias, 1.0);
    const auto e05 = extraversion_weights(base, bias, 0.5);
    const auto nl = normal_life_weights(base, bias);
    for (std::size_t k = 0; k < base.size(); ++k) {
      EXPECT_NEAR(e1[k].weight, bias * base[k].weight, 1e-15);
      EXPECT_NEAR(e05[k].weight, 0.5 * nl[k].weight, 1e-15);
    }
  }
}

TEST(MotionVector, SpotValues) {
  EXPECT_EQ(motion_vector({}), (Vec2{0, 0}));
  const std::vector<WeightedMarker> one{{0, {2, 0}, 1.0}};
  EXPECT_EQ(motion_vector(one), (Vec2{2, 0}));
  const std::vector<WeightedMarker> pair{{0, {1, 0.5}, 0.3}, {1, {1, -0.5}, 0.3}};
  const Vec2 m = motion_vector(pair);
  EXPECT_NEAR(m.x, 0.6, 1e-15);
  EXPECT_EQ(m.y, 0.0);
}

TEST(ComputeMotion, EmptySetIsStill) {
  for (auto v : {BehaviorVariant::BioCrowds, BehaviorVariant::NormalLife, BehaviorVariant::Extraversion}) {
    const Motion m = compute_motion({v, 70}, {1, 0}, {}, 0.8);
    EXPECT_EQ(m.vector, (Vec2{0, 0}));
    EXPECT_EQ(m.comfort, 0.0);
    EXPECT_EQ(m.bias, 0.0);
  }
}

TEST(ComputeMotion, ComposesThePipeline) {
  std::mt19937_64 gen(4);
  const auto ms = random_markers(gen, 40, 2.0);
  const Vec2 goal{3, -1};
  const auto base = biocrowds_weights(goal, ms);
  const double c = 40.0 / 70.0;
  const double bias = std::sin(c * std::numbers::pi / 2.0);

  const Motion bio = compute_motion({BehaviorVariant::BioCrowds, 70}, goal, ms, 0.3);
  const Vec2 want_bio = motion_vector(base);
  EXPECT_NEAR(bio.vector.x, want_bio.x, 1e-12);
  EXPECT_NEAR(bio.vector.y, want_bio.y, 1e-12);
  EXPECT_NEAR(bio.comfort, c, 1e-15);
  EXPECT_NEAR(bio.bias, bias, 1e-12);

  Vec2 want_e{};
  for (const auto& m : base) want_e += m.offset * (bias * m.weight * 0.3 + (1 - bias) * 0.7);
  const Motion ext = compute_motion({BehaviorVariant::Extraversion, 70}, goal, ms, 0.3);
  EXPECT_NEAR(ext.vector.x, want_e.x, 1e-12);
  EXPECT_NEAR(ext.vector.y, want_e.y, 1e-12);

  Vec2 want_nl{};
  for (const auto& m : base) want_nl += m.offset * (bias * m.weight + (1 - bias));
  const Motion nl = compute_motion({BehaviorVariant::NormalLife, 70}, goal, ms, 0.3);
  EXPECT_NEAR(nl.vector.x, want_nl.x, 1e-12);
  EXPECT_NEAR(nl.vector.y, want_nl.y, 1e-12);
}

TEST(ComputeMotion, UsesSwappedRules) {
  WeightingRules rules;
  rules.extraversion = [](std::span<const WeightedMarker> base, double, double) {
    std::vector<WeightedMarker> out(base.begin(), base.end());
    for (auto& m : out) m.weight = 0.0;
    return out;
  };
  std::mt19937_64 gen(5);
  const Motion m = compute_motion({BehaviorVariant::Extraversion, 70}, {1, 0}, random_markers(gen, 5, 1), 1, rules);
  EXPECT_EQ(m.vector, (Vec2{0, 0}));
}

TEST(BehaviorVariant, NamesRoundTrip) {
  for (auto v : {BehaviorVariant::BioCrowds, BehaviorVariant::NormalLife, BehaviorVariant::Extraversion})
    EXPECT_EQ(behavior_variant_from_string(to_string(v)), v);
  EXPECT_THROW(behavior_variant_from_string("Introversion"), std::invalid_argument);
}
