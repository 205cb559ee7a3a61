// Temporal decision head: persistence triggering, hysteresis release and
// per-class cooldown over a stream of probability frames.
//
// A class c != Normal opens an event at frame t when, for each of the K frames
// ending at t, c is the argmax class and p(c) >= tau. The open event is
// backdated to the first frame of that window. It closes once p(c) < tau_off
// holds for M consecutive frames; t_end is the last frame with p(c) >= tau_off.
// After closing, class c alone is suppressed for `cooldown` frames.
#pragma once

#include <optional>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

struct GateState {
  enum class Mode { kIdle, kActive, kCooldown };

  Mode mode = Mode::kIdle;
  // Class of the open event (kActive) or of the suppressed class (kCooldown).
  ClassId mode_class = 0;
  FrameIndex open_t_start = 0;
  int cooldown_remaining = 0;

  // Consecutive frames on which run_class was argmax with p >= tau.
  ClassId run_class = 0;
  int trigger_run = 0;
  // Consecutive frames with p(active class) < tau_off.
  int release_run = 0;
  FrameIndex last_support_t = 0;

  std::size_t num_classes = 0;  // fixed by the first frame
  std::optional<FrameIndex> last_t;
  std::optional<FrameIndex> last_closed_end;

  bool operator==(const GateState&) const = default;
};

struct GateStepResult {
  GateState state;
  std::optional<AlertEvent> emitted;
};

// Advances the gate by one frame. Throws kNonMonotonicTime when frame.t does
// not strictly increase, and the validate_frame errors for malformed frames.
GateStepResult gate_step(const GateState& state, const ProbabilityFrame& frame,
                         const GateConfig& cfg);

// Closes a still-open event at last_t; nothing otherwise.
std::optional<AlertEvent> gate_finalize(const GateState& state, FrameIndex last_t);

std::vector<AlertEvent> run_gate(const std::vector<ProbabilityFrame>& frames,
                                 const GateConfig& cfg);

// Streaming wrapper owning one GateState; one instance per stream.
class TemporalGate {
 public:
  explicit TemporalGate(GateConfig cfg);

  std::optional<AlertEvent> step(const ProbabilityFrame& frame);
  std::optional<AlertEvent> finalize();

  const GateState& state() const { return state_; }
  const GateConfig& config() const { return cfg_; }

 private:
  GateConfig cfg_;
  GateState state_;
  bool finalized_ = false;
};

// Frames at which the persistence condition holds for some non-Normal class,
// independent of gate state (no hysteresis, no cooldown).
std::vector<FrameIndex> trigger_frames(const std::vector<ProbabilityFrame>& frames,
                                       double tau, int k);

}  // namespace alertgate
