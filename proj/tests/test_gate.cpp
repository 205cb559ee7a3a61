#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "alertgate/gate.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

namespace alertgate {
namespace {

using testing::append;
using testing::peaked;
using testing::repeat;

std::vector<ProbabilityFrame> six_frame_stream() {
  std::vector<ProbabilityFrame> frames;
  append(frames, 4, 0.8, 4);
  append(frames, 4, 0.5, 2);
  return frames;
}

TEST(Gate, SixFrameExampleEmitsOnClosingStep) {
  const GateConfig cfg{0.75, 3, 0.6, 2, 0};
  const auto frames = six_frame_stream();
  // Expected value frozen from the brute-force oracle.
  ASSERT_EQ(oracle::gate(frames, cfg), (std::vector<AlertEvent>{{4, 0, 3}}));

  TemporalGate gate(cfg);
  for (const auto& f : frames) {
    const auto emitted = gate.step(f);
    if (f.t == 5) {
      ASSERT_TRUE(emitted.has_value());
      EXPECT_EQ(*emitted, (AlertEvent{4, 0, 3}));
    } else {
      EXPECT_FALSE(emitted.has_value()) << "t=" << f.t;
    }
    if (f.t == 2) EXPECT_EQ(gate.state().mode, GateState::Mode::kActive);
  }
  EXPECT_FALSE(gate.finalize().has_value());
  EXPECT_EQ(run_gate(frames, cfg), (std::vector<AlertEvent>{{4, 0, 3}}));
}

TEST(Gate, SubThresholdAndNormalNeverAlert) {
  EXPECT_TRUE(run_gate(repeat(6, 0.70, 300), GateConfig{}).empty());
  EXPECT_TRUE(run_gate(repeat(kNormalClass, 0.99, 300), GateConfig{}).empty());
  EXPECT_TRUE(run_gate({}, GateConfig{}).empty());
}

TEST(Gate, FinalizeClosesOnlyActiveEvents) {
  GateState active;
  active.mode = GateState::Mode::kActive;
  active.mode_class = 7;
  active.open_t_start = 10;
  EXPECT_EQ(gate_finalize(active, 40), (AlertEvent{7, 10, 40}));

  EXPECT_FALSE(gate_finalize(GateState{}, 40).has_value());

  GateState cooling;
  cooling.mode = GateState::Mode::kCooldown;
  cooling.mode_class = 7;
  cooling.cooldown_remaining = 5;
  EXPECT_FALSE(gate_finalize(cooling, 40).has_value());
}

TEST(Gate, TwoSeparatedEpisodes) {
  const GateConfig cfg{0.75, 5, 0.6, 3, 0};
  std::vector<ProbabilityFrame> frames;
  append(frames, 1, 0.95, 20);
  append(frames, 4, 0.9, 30);
  append(frames, 1, 0.95, 40);
  append(frames, 4, 0.9, 30);
  append(frames, 1, 0.95, 20);
  const auto expected = oracle::gate(frames, cfg);
  ASSERT_EQ(expected, (std::vector<AlertEvent>{{4, 20, 49}, {4, 90, 119}}));
  EXPECT_EQ(run_gate(frames, cfg), expected);
}

TEST(Gate, OpenEventIsClosedAtStreamEnd) {
  const GateConfig cfg{0.75, 5, 0.6, 3, 0};
  std::vector<ProbabilityFrame> frames;
  append(frames, 1, 0.95, 10);
  append(frames, 9, 0.9, 20);
  EXPECT_EQ(run_gate(frames, cfg), (std::vector<AlertEvent>{{9, 10, 29}}));
}

TEST(Gate, HysteresisKeepsEventThroughModerateDips) {
  const GateConfig cfg{0.75, 5, 0.6, 3, 0};
  std::vector<ProbabilityFrame> frames;
  append(frames, 4, 0.9, 10);
  append(frames, 4, 0.65, 20);  // below tau, above tau_off
  append(frames, 4, 0.4, 2);    // fewer than M release frames
  append(frames, 4, 0.9, 10);
  append(frames, 1, 0.95, 10);
  EXPECT_EQ(run_gate(frames, cfg), (std::vector<AlertEvent>{{4, 0, 41}}));
}

TEST(Gate, ContinuationDoesNotRequireArgmax) {
  const GateConfig cfg{0.75, 3, 0.3, 2, 0};
  std::vector<ProbabilityFrame> frames = repeat(4, 0.9, 5);
  // Class 6 dominates while class 4 keeps p = 0.35 >= tau_off.
  for (FrameIndex t = 5; t < 15; ++t) {
    ProbabilityFrame f{t, std::vector<double>(kNumClasses, 0.0)};
    f.probs[3] = 0.35;
    f.probs[5] = 0.65;
    frames.push_back(f);
  }
  EXPECT_EQ(run_gate(frames, cfg), (std::vector<AlertEvent>{{4, 0, 14}}));
}

TEST(Gate, NoPreemptionWhileActive) {
  const GateConfig cfg{0.3, 3, 0.2, 2, 0};
  std::vector<ProbabilityFrame> frames = repeat(4, 0.9, 5);
  for (FrameIndex t = 5; t < 12; ++t) {
    ProbabilityFrame f{t, std::vector<double>(kNumClasses, 0.0)};
    f.probs[3] = 0.25;  // class 4 still above tau_off
    f.probs[6] = 0.75;  // class 7 satisfies the trigger
    frames.push_back(f);
  }
  append(frames, 7, 0.9, 3);
  // Class 4 releases at t=13 (t_end=11); class 7 fires on the same step and is
  // clamped to start after the closed event.
  const auto events = run_gate(frames, cfg);
  EXPECT_EQ(events, (std::vector<AlertEvent>{{4, 0, 11}, {7, 12, 14}}));
  EXPECT_EQ(events, oracle::gate(frames, cfg));
}

TEST(Gate, CooldownIsPerClass) {
  const GateConfig cfg{0.75, 3, 0.6, 1, 10};
  std::vector<ProbabilityFrame> frames = repeat(4, 0.9, 5);
  append(frames, 1, 0.95, 1);  // release at t=5
  append(frames, 4, 0.9, 12);  // t=6..15 suppressed; t=16 is the first allowed trigger
  append(frames, 1, 0.95, 2);
  const auto events = run_gate(frames, cfg);
  EXPECT_EQ(events, (std::vector<AlertEvent>{{4, 0, 4}, {4, 14, 17}}));
  EXPECT_EQ(events, oracle::gate(frames, cfg));

  std::vector<ProbabilityFrame> other = repeat(4, 0.9, 5);
  append(other, 1, 0.95, 1);
  append(other, 8, 0.9, 5);
  append(other, 1, 0.95, 2);
  EXPECT_EQ(run_gate(other, cfg), (std::vector<AlertEvent>{{4, 0, 4}, {8, 6, 10}}));
}

TEST(Gate, CooldownCountsDownOnePerFrame) {
  const GateConfig cfg{0.75, 2, 0.6, 1, 4};
  TemporalGate gate(cfg);
  auto frames = repeat(4, 0.9, 3);
  append(frames, 1, 0.95, 6);
  std::vector<int> remaining;
  for (const auto& f : frames) {
    gate.step(f);
    remaining.push_back(gate.state().mode == GateState::Mode::kCooldown
                            ? gate.state().cooldown_remaining
                            : -1);
  }
  EXPECT_EQ(remaining, (std::vector<int>{-1, -1, -1, 4, 3, 2, 1, -1, -1}));
}

TEST(Gate, ErrorsAbortTheRun) {
  auto frames = repeat(4, 0.9, 5);
  frames[3].t = 1;
  try {
    run_gate(frames, GateConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonMonotonicTime);
  }
  auto broken = repeat(4, 0.9, 5);
  broken[2].probs[0] = 0.5;
  EXPECT_THROW(run_gate(broken, GateConfig{}), Error);
  EXPECT_THROW(run_gate(repeat(4, 0.9, 5), GateConfig{0.75, 0, 0.6, 3, 0}), Error);
}

TEST(Gate, GapInFrameIndicesBreaksPersistence) {
  const GateConfig cfg{0.75, 3, 0.6, 2, 0};
  auto frames = repeat(4, 0.9, 2);
  for (auto& f : repeat(4, 0.9, 2, 10)) frames.push_back(f);
  EXPECT_TRUE(run_gate(frames, cfg).empty());
  EXPECT_TRUE(trigger_frames(frames, cfg.tau, cfg.k).empty());
}

TEST(GateProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t classes = std::uniform_int_distribution<std::size_t>(2, 17)(rng);
    const auto frames = oracle::random_stream(rng, 200, classes);
    const auto cfg = oracle::random_gate_config(rng);
    ASSERT_EQ(run_gate(frames, cfg), oracle::gate(frames, cfg)) << "trial " << trial;
  }
}

TEST(GateProperty, EventsOrderedDisjointAndNeverNormal) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto frames = oracle::random_stream(rng, 200, 17);
    const auto cfg = oracle::random_gate_config(rng);
    const auto events = run_gate(frames, cfg);
    for (std::size_t i = 0; i < events.size(); ++i) {
      EXPECT_NE(events[i].class_id, kNormalClass);
      EXPECT_LE(events[i].t_start, events[i].t_end);
      EXPECT_GE(events[i].t_start, 0);
      if (i > 0) EXPECT_GT(events[i].t_start, events[i - 1].t_end);
    }
    EXPECT_EQ(events, run_gate(frames, cfg));
  }
}

TEST(GateProperty, TriggerSetsNestInKAndTau) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto frames = oracle::random_stream(rng, 200, 17);
    const double tau = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
    const int k = std::uniform_int_distribution<int>(1, 9)(rng);
    const auto base = trigger_frames(frames, tau, k);
    const auto longer = trigger_frames(frames, tau, k + 1);
    const auto stricter = trigger_frames(frames, tau + 0.05, k);
    EXPECT_TRUE(std::includes(base.begin(), base.end(), longer.begin(), longer.end()));
    EXPECT_TRUE(std::includes(base.begin(), base.end(), stricter.begin(), stricter.end()));
    const auto ref = oracle::trigger_set(frames, tau, k);
    EXPECT_EQ(std::vector<FrameIndex>(ref.begin(), ref.end()), base);
  }
}

}  // namespace
}  // namespace alertgate
