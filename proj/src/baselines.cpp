#include "alertgate/baselines.hpp"

#include <deque>
#include <map>

namespace alertgate {

namespace {

// Checks ordering and a consistent arity across the stream.
void check_stream(const std::vector<ProbabilityFrame>& frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i > 0 && frames[i].t <= frames[i - 1].t) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "frame t=" + std::to_string(frames[i].t) + " does not follow t=" +
                      std::to_string(frames[i - 1].t));
    }
    validate_frame(frames[i], frames.front().probs.size());
  }
}

std::vector<FrameIndex> times_of(const std::vector<ProbabilityFrame>& frames) {
  std::vector<FrameIndex> ts;
  ts.reserve(frames.size());
  for (const auto& f : frames) ts.push_back(f.t);
  return ts;
}

}  // namespace

void validate(const MajorityConfig& cfg) {
  if (cfg.w < 1) throw Error(ErrorCode::kInvalidConfig, "majority window must be >= 1");
}

void validate(const EmaConfig& cfg) {
  if (!(cfg.lambda >= 0.0 && cfg.lambda < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "EMA lambda must be in [0,1)");
  }
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "EMA tau must be in (0,1]");
  }
}

std::vector<AlertEvent> merge_alert_frames(const std::vector<FrameIndex>& ts,
                                           const std::vector<ClassId>& alert_class) {
  std::vector<AlertEvent> events;
  bool open = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const ClassId c = alert_class[i];
    const bool continues = open && events.back().class_id == c && ts[i] == events.back().t_end + 1;
    if (c == kNormalClass) {
      open = false;
    } else if (continues) {
      events.back().t_end = ts[i];
    } else {
      events.push_back({c, ts[i], ts[i]});
      open = true;
    }
  }
  return events;
}

std::vector<AlertEvent> frame_only_alerts(const std::vector<ProbabilityFrame>& frames) {
  check_stream(frames);
  std::vector<ClassId> labels;
  labels.reserve(frames.size());
  for (const auto& f : frames) labels.push_back(argmax_class(f.probs));
  return merge_alert_frames(times_of(frames), labels);
}

std::vector<AlertEvent> majority_vote_alerts(const std::vector<ProbabilityFrame>& frames,
                                             const MajorityConfig& cfg) {
  validate(cfg);
  check_stream(frames);
  std::deque<ClassId> window;
  std::map<ClassId, int> votes;
  ClassId output = kNormalClass;
  std::vector<ClassId> outputs;
  outputs.reserve(frames.size());

  for (const auto& f : frames) {
    const ClassId hard = argmax_class(f.probs);
    window.push_back(hard);
    ++votes[hard];
    if (static_cast<int>(window.size()) > cfg.w) {
      if (--votes[window.front()] == 0) votes.erase(window.front());
      window.pop_front();
    }
    int best = 0;
    int holders = 0;
    ClassId winner = kNormalClass;
    for (const auto& [c, n] : votes) {
      if (n > best) {
        best = n;
        holders = 1;
        winner = c;
      } else if (n == best) {
        ++holders;
      }
    }
    if (holders == 1) output = winner;
    outputs.push_back(output);
  }
  return merge_alert_frames(times_of(frames), outputs);
}

std::vector<std::vector<double>> ema_smooth(const std::vector<ProbabilityFrame>& frames,
                                            double lambda) {
  std::vector<std::vector<double>> smoothed;
  smoothed.reserve(frames.size());
  for (const auto& f : frames) {
    if (smoothed.empty()) {
      smoothed.push_back(f.probs);
      continue;
    }
    std::vector<double> next(f.probs.size());
    const auto& prev = smoothed.back();
    for (std::size_t c = 0; c < next.size(); ++c) {
      next[c] = lambda * prev[c] + (1.0 - lambda) * f.probs[c];
    }
    smoothed.push_back(std::move(next));
  }
  return smoothed;
}

std::vector<AlertEvent> ema_alerts(const std::vector<ProbabilityFrame>& frames,
                                   const EmaConfig& cfg) {
  validate(cfg);
  check_stream(frames);
  const auto smoothed = ema_smooth(frames, cfg.lambda);
  std::vector<ClassId> labels;
  labels.reserve(frames.size());
  for (const auto& s : smoothed) {
    const ClassId top = argmax_class(s);
    labels.push_back(s[static_cast<std::size_t>(top - 1)] >= cfg.tau ? top : kNormalClass);
  }
  return merge_alert_frames(times_of(frames), labels);
}

}  // namespace alertgate
