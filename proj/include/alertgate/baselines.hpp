// Non-gated comparison strategies for converting frame predictions to alerts.
#pragma once

#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

struct MajorityConfig {
  int w = 15;
};

struct EmaConfig {
  double lambda = 0.8;
  double tau = 0.75;
};

void validate(const MajorityConfig& cfg);
void validate(const EmaConfig& cfg);

// Merges runs of consecutive alerting frames with the same class into events.
// `alert_class[i]` is the class alerted at frames[i].t, or Normal for none.
std::vector<AlertEvent> merge_alert_frames(const std::vector<FrameIndex>& ts,
                                           const std::vector<ClassId>& alert_class);

// Alerts on every frame whose argmax is not Normal.
std::vector<AlertEvent> frame_only_alerts(const std::vector<ProbabilityFrame>& frames);

// Hard-label vote over the last w frames (prefix-truncated at stream start).
// The unique most-voted class wins; a tie keeps the previous output.
std::vector<AlertEvent> majority_vote_alerts(const std::vector<ProbabilityFrame>& frames,
                                             const MajorityConfig& cfg);

// Smoothed probabilities: s_0 = p_0, s_t = lambda * s_{t-1} + (1 - lambda) * p_t.
std::vector<std::vector<double>> ema_smooth(const std::vector<ProbabilityFrame>& frames,
                                            double lambda);

std::vector<AlertEvent> ema_alerts(const std::vector<ProbabilityFrame>& frames,
                                   const EmaConfig& cfg);

}  // namespace alertgate
