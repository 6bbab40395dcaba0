#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "mcrowds/frame.hpp"
#include "mcrowds/scenario.hpp"
#include "mcrowds/simulation.hpp"
#include "mcrowds/trace.hpp"

using namespace mcrowds;

TEST(InputTrace, InputInEffect) {
  InputTrace t;
  t.inputs = {{5, {1, 0}}, {10, {0, 1}}, {10, {0, -1}}, {20, {0, 0}}};
  EXPECT_EQ(t.input_at(0), (Vec2{0, 0}));
  EXPECT_EQ(t.input_at(4), (Vec2{0, 0}));
  EXPECT_EQ(t.input_at(5), (Vec2{1, 0}));
  EXPECT_EQ(t.input_at(9), (Vec2{1, 0}));
  EXPECT_EQ(t.input_at(10), (Vec2{0, -1}));  // last entry at a tick wins
  EXPECT_EQ(t.input_at(25), (Vec2{0, 0}));
}

TEST(InputTrace, ParsePresetHeader) {
  const InputTrace t = parse_trace(
      R"({"schema":"mcrowds.trace","version":1,"preset":"scenario2","seed":9,"ticks":50}
{"tick":0,"dx":1,"dy":0}
{"tick":12,"dx":-0.5,"dy":0.5}
)");
  EXPECT_EQ(t.scenario.name, "scenario2");
  EXPECT_EQ(t.scenario.seed, 9u);
  EXPECT_EQ(t.ticks, 50);
  ASSERT_EQ(t.inputs.size(), 2u);
  EXPECT_EQ(t.inputs[1], (TraceInput{12, {-0.5, 0.5}}));
}

TEST(InputTrace, RenderRoundTrips) {
  InputTrace t;
  t.scenario = preset("scenario3");
  t.scenario.seed = 77;
  t.ticks = 123;
  t.inputs = {{0, {0.1, 0.2}}, {40, {-1, 0}}};
  const InputTrace back = parse_trace(render_trace(t));
  EXPECT_EQ(back.scenario, t.scenario);
  EXPECT_EQ(back.ticks, t.ticks);
  EXPECT_EQ(back.inputs, t.inputs);
}

TEST(InputTrace, RejectsMalformed) {
  EXPECT_ANY_THROW(parse_trace(""));
  EXPECT_ANY_THROW(parse_trace(R"({"schema":"other","version":1,"preset":"scenario1","ticks":5})"));
  EXPECT_ANY_THROW(parse_trace(R"({"schema":"mcrowds.trace","version":2,"preset":"scenario1","ticks":5})"));
  EXPECT_ANY_THROW(parse_trace(R"({"schema":"mcrowds.trace","version":1,"preset":"scenario1","ticks":-1})"));
  EXPECT_ANY_THROW(parse_trace(R"({"schema":"mcrowds.trace","version":1,"preset":"nope","ticks":5})"));
  EXPECT_ANY_THROW(parse_trace(R"({"schema":"mcrowds.trace","version":1,"preset":"scenario1","ticks":5}
{"tick":0,"dx":"left","dy":0})"));
}

TEST(Frame, JsonRoundTripIsLossless) {
  const auto frames = run(preset("scenario2"), 40);
  for (const FrameRecord& f : frames) EXPECT_EQ(frame_from_json(frame_to_json(f)), f);
}

TEST(Frame, JsonShape) {
  const FrameRecord f = snapshot(build_state(preset("scenario1")));
  const auto j = nlohmann::json::parse(frame_to_json(f));
  EXPECT_EQ(j["tick"], 0);
  ASSERT_EQ(j["agents"].size(), 30u);
  const auto& a = j["agents"][0];
  for (const char* key : {"id", "x", "y", "comfort", "n_markers", "extraversion", "profile"})
    EXPECT_TRUE(a.contains(key)) << key;
  EXPECT_EQ(j["avatar"]["mode"], "Spectator");
  EXPECT_EQ(frame_to_json(f).find('\n'), std::string::npos);
}

TEST(Frame, RejectsMalformed) {
  EXPECT_THROW(frame_from_json("{"), std::invalid_argument);
  EXPECT_THROW(frame_from_json(R"({"tick":0})"), std::invalid_argument);
  EXPECT_THROW(frame_from_json(R"({"tick":0,"agents":[{"id":0}],"avatar":null})"), std::invalid_argument);
}
