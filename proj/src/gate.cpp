#include "alertgate/gate.hpp"

#include <algorithm>

namespace alertgate {

namespace {

void check_order(const std::optional<FrameIndex>& last_t, FrameIndex t) {
  if (last_t && t <= *last_t) {
    throw Error(ErrorCode::kNonMonotonicTime,
                "frame t=" + std::to_string(t) + " does not follow t=" +
                    std::to_string(*last_t));
  }
}

// Updates the per-stream persistence run. A gap in frame indices breaks it.
void advance_run(ClassId& run_class, int& run, const ProbabilityFrame& frame, double tau,
                 bool contiguous) {
  const ClassId top = argmax_class(frame.probs);
  if (top != kNormalClass && frame.prob(top) >= tau) {
    if (contiguous && run_class == top) {
      ++run;
    } else {
      run_class = top;
      run = 1;
    }
  } else {
    run_class = 0;
    run = 0;
  }
}

}  // namespace

GateStepResult gate_step(const GateState& state, const ProbabilityFrame& frame,
                         const GateConfig& cfg) {
  check_order(state.last_t, frame.t);
  GateStepResult out{state, std::nullopt};
  GateState& s = out.state;

  if (s.num_classes == 0) {
    if (frame.probs.empty()) throw Error(ErrorCode::kWrongArity, "empty probability vector");
    s.num_classes = frame.probs.size();
  }
  validate_frame(frame, s.num_classes);

  const bool contiguous = s.last_t && frame.t == *s.last_t + 1;
  advance_run(s.run_class, s.trigger_run, frame, cfg.tau, contiguous);
  s.last_t = frame.t;

  const bool was_cooling = s.mode == GateState::Mode::kCooldown;

  if (s.mode == GateState::Mode::kActive) {
    if (frame.prob(s.mode_class) < cfg.tau_off) {
      ++s.release_run;
    } else {
      s.release_run = 0;
      s.last_support_t = frame.t;
    }
    if (s.release_run >= cfg.m) {
      out.emitted = AlertEvent{s.mode_class, s.open_t_start, s.last_support_t};
      s.last_closed_end = s.last_support_t;
      s.release_run = 0;
      if (cfg.cooldown > 0) {
        s.mode = GateState::Mode::kCooldown;
        s.cooldown_remaining = cfg.cooldown;
      } else {
        s.mode = GateState::Mode::kIdle;
        s.mode_class = 0;
      }
    }
  }

  if (s.mode != GateState::Mode::kActive && s.trigger_run >= cfg.k) {
    const bool suppressed =
        s.mode == GateState::Mode::kCooldown && s.mode_class == s.run_class;
    if (!suppressed) {
      FrameIndex start = frame.t - cfg.k + 1;
      // Backdating never reaches into the previous event.
      if (s.last_closed_end) start = std::max(start, *s.last_closed_end + 1);
      s.mode = GateState::Mode::kActive;
      s.mode_class = s.run_class;
      s.open_t_start = start;
      s.release_run = 0;
      s.last_support_t = frame.t;
      s.cooldown_remaining = 0;
      return out;
    }
  }

  if (was_cooling && s.mode == GateState::Mode::kCooldown) {
    if (--s.cooldown_remaining == 0) {
      s.mode = GateState::Mode::kIdle;
      s.mode_class = 0;
    }
  }
  return out;
}

std::optional<AlertEvent> gate_finalize(const GateState& state, FrameIndex last_t) {
  if (state.mode != GateState::Mode::kActive) return std::nullopt;
  return AlertEvent{state.mode_class, state.open_t_start, last_t};
}

std::vector<AlertEvent> run_gate(const std::vector<ProbabilityFrame>& frames,
                                 const GateConfig& cfg) {
  validate(cfg);
  std::vector<AlertEvent> events;
  GateState state;
  for (const auto& frame : frames) {
    auto step = gate_step(state, frame, cfg);
    state = std::move(step.state);
    if (step.emitted) events.push_back(*step.emitted);
  }
  if (!frames.empty()) {
    if (auto last = gate_finalize(state, frames.back().t)) events.push_back(*last);
  }
  return events;
}

TemporalGate::TemporalGate(GateConfig cfg) : cfg_(cfg) { validate(cfg_); }

std::optional<AlertEvent> TemporalGate::step(const ProbabilityFrame& frame) {
  if (finalized_) throw Error(ErrorCode::kNonMonotonicTime, "gate already finalized");
  auto result = gate_step(state_, frame, cfg_);
  state_ = std::move(result.state);
  return result.emitted;
}

std::optional<AlertEvent> TemporalGate::finalize() {
  if (finalized_ || !state_.last_t) return std::nullopt;
  finalized_ = true;
  return gate_finalize(state_, *state_.last_t);
}

std::vector<FrameIndex> trigger_frames(const std::vector<ProbabilityFrame>& frames,
                                       double tau, int k) {
  std::vector<FrameIndex> out;
  ClassId run_class = 0;
  int run = 0;
  std::optional<FrameIndex> last_t;
  for (const auto& frame : frames) {
    check_order(last_t, frame.t);
    const bool contiguous = last_t && frame.t == *last_t + 1;
    advance_run(run_class, run, frame, tau, contiguous);
    last_t = frame.t;
    if (run >= k) out.push_back(frame.t);
  }
  return out;
}

}  // namespace alertgate
