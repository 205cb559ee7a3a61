#include <gtest/gtest.h>

#include <random>

#include "alertgate/baselines.hpp"
#include "alertgate/gate.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

namespace alertgate {
namespace {

using testing::peaked;
using testing::stream_of;

TEST(FrameOnly, MergesContiguousFrames) {
  const auto frames = stream_of({{1, 0.9}, {4, 0.9}, {4, 0.9}, {1, 0.9}});
  EXPECT_EQ(frame_only_alerts(frames), (std::vector<AlertEvent>{{4, 1, 2}}));
}

TEST(FrameOnly, InterruptionSplitsEvents) {
  const auto frames = stream_of({{4, 0.9}, {1, 0.9}, {4, 0.9}, {1, 0.9}});
  EXPECT_EQ(frame_only_alerts(frames), (std::vector<AlertEvent>{{4, 0, 0}, {4, 2, 2}}));
}

TEST(FrameOnly, ClassChangeStartsNewEvent) {
  const auto frames = stream_of({{4, 0.9}, {4, 0.9}, {6, 0.9}, {6, 0.4}});
  EXPECT_EQ(frame_only_alerts(frames), (std::vector<AlertEvent>{{4, 0, 1}, {6, 2, 3}}));
}

TEST(MergeAlertFrames, GapsBreakRuns) {
  EXPECT_EQ(merge_alert_frames({0, 1, 2, 5, 6}, {3, 3, 1, 3, 3}),
            (std::vector<AlertEvent>{{3, 0, 1}, {3, 5, 6}}));
}

TEST(Majority, TieKeepsPreviousOutput) {
  // Window 2 over argmax labels 4,4,1,1: the tie at t=2 holds class 4.
  const auto frames = stream_of({{4, 0.9}, {4, 0.9}, {1, 0.9}, {1, 0.9}});
  EXPECT_EQ(majority_vote_alerts(frames, {2}), (std::vector<AlertEvent>{{4, 0, 2}}));
  // A tie on the second frame keeps the initial Normal output.
  const auto other = stream_of({{1, 0.9}, {4, 0.9}, {1, 0.9}});
  EXPECT_TRUE(majority_vote_alerts(other, {2}).empty());
}

TEST(Majority, WindowOfOneIsFrameOnly) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto frames = oracle::random_stream(rng, 150, 17);
    EXPECT_EQ(majority_vote_alerts(frames, {1}), frame_only_alerts(frames));
  }
}

TEST(Majority, SuppressesShortSpikes) {
  std::vector<ProbabilityFrame> frames = testing::repeat(1, 0.9, 20);
  frames[10] = peaked(10, 4, 0.9);
  frames[11] = peaked(11, 4, 0.9);
  EXPECT_TRUE(majority_vote_alerts(frames, {15}).empty());
  EXPECT_THROW(majority_vote_alerts(frames, {0}), Error);
}

TEST(Ema, HalfLambdaAveragesTwoFrames) {
  const auto frames = stream_of({{4, 1.0}, {1, 1.0}});
  const auto s = ema_smooth(frames, 0.5);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0][3], 1.0);
  EXPECT_DOUBLE_EQ(s[1][3], 0.5);
  EXPECT_DOUBLE_EQ(s[1][0], 0.5);
}

TEST(Ema, ConstantStreamIsFixedPoint) {
  const auto frames = testing::repeat(6, 0.8, 40);
  for (double lambda : {0.0, 0.3, 0.8, 0.99}) {
    for (const auto& s : ema_smooth(frames, lambda)) {
      for (std::size_t c = 0; c < s.size(); ++c) EXPECT_NEAR(s[c], frames[0].probs[c], 1e-12);
    }
  }
}

TEST(Ema, StaysOnSimplex) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto frames = oracle::random_stream(rng, 200, 17);
    for (const auto& s : ema_smooth(frames, 0.8)) {
      double sum = 0.0;
      for (double x : s) {
        EXPECT_GE(x, 0.0);
        sum += x;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(Ema, AlertsNeedSmoothedMass) {
  std::vector<ProbabilityFrame> frames = testing::repeat(1, 0.9, 10);
  testing::append(frames, 4, 0.95, 30);
  const auto events = ema_alerts(frames, {0.8, 0.75});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].class_id, 4);
  EXPECT_GT(events[0].t_start, 10);
  EXPECT_EQ(events[0].t_end, 39);
  EXPECT_THROW(ema_alerts(frames, {1.0, 0.75}), Error);
}

// With K = 1, tau = tau_off = 0.5, M = 1 and no cooldown the gate reduces to
// per-frame alerting whenever every argmax carries more than half the mass.
TEST(Baselines, FrameOnlyEqualsDegenerateGate) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cls(1, 17);
  std::uniform_real_distribution<double> conf(0.51, 0.99);
  std::uniform_int_distribution<int> run(1, 8);
  const GateConfig cfg{0.5, 1, 0.5, 1, 0};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ProbabilityFrame> frames;
    for (int seg = 0; seg < 20; ++seg) {
      const int c = cls(rng);
      for (int r = run(rng); r > 0; --r) {
        frames.push_back(peaked(static_cast<FrameIndex>(frames.size()), c, conf(rng)));
      }
    }
    EXPECT_EQ(run_gate(frames, cfg), frame_only_alerts(frames));
  }
}

TEST(Baselines, RejectMalformedStreams) {
  auto frames = stream_of({{4, 0.9}, {4, 0.9}});
  frames[1].t = 0;
  EXPECT_THROW(frame_only_alerts(frames), Error);
  EXPECT_THROW(ema_alerts(frames, {}), Error);
  EXPECT_THROW(majority_vote_alerts(frames, {}), Error);
}

}  // namespace
}  // namespace alertgate
