#include "alertgate/core.hpp"

#include <cmath>
#include <sstream>

namespace alertgate {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotASimplex: return "NotASimplex";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kWrongArity: return "WrongArity";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidMap: return "InvalidMap";
    case ErrorCode::kNonContiguousLabels: return "NonContiguousLabels";
    case ErrorCode::kZeroDuration: return "ZeroDuration";
    case ErrorCode::kNoGtEvents: return "NoGtEvents";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kZeroCount: return "ZeroCount";
    case ErrorCode::kDegenerateProbability: return "DegenerateProbability";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

const std::array<BehaviorClass, kNumClasses>& taxonomy() {
  static const std::array<BehaviorClass, kNumClasses> kTaxonomy{{
      {1, "Normal (Safe driving)"},
      {2, "Phone – Talk Left"},
      {3, "Phone – Talk Right"},
      {4, "Phone – Text Left"},
      {5, "Phone – Text Right"},
      {6, "Eating"},
      {7, "Drinking"},
      {8, "Smoking Right"},
      {9, "Smoking Left"},
      {10, "Reaching Behind"},
      {11, "Look Left"},
      {12, "Look Down"},
      {13, "Talking to Passengers / Look Right"},
      {14, "Makeup / Hand on Hair"},
      {15, "Control Panel / GPS"},
      {16, "Yawning"},
      {17, "Sleep / Eyes Closed"},
  }};
  return kTaxonomy;
}

bool is_valid_class(ClassId id) {
  return id >= 1 && id <= static_cast<ClassId>(kNumClasses);
}

std::string_view class_name(ClassId id) {
  if (!is_valid_class(id)) {
    throw Error(ErrorCode::kOutOfRange, "class id out of range: " + std::to_string(id));
  }
  return taxonomy()[static_cast<std::size_t>(id - 1)].name;
}

void validate(const GateConfig& cfg) {
  std::ostringstream why;
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) {
    why << "tau must be in (0,1], got " << cfg.tau;
  } else if (cfg.k < 1) {
    why << "k must be >= 1, got " << cfg.k;
  } else if (!(cfg.tau_off > 0.0 && cfg.tau_off <= cfg.tau)) {
    why << "tau_off must be in (0, tau], got " << cfg.tau_off;
  } else if (cfg.tau_off == cfg.tau && cfg.k != 1) {
    why << "tau_off == tau is only permitted with k = 1";
  } else if (cfg.m < 1) {
    why << "m must be >= 1, got " << cfg.m;
  } else if (cfg.cooldown < 0) {
    why << "cooldown must be >= 0, got " << cfg.cooldown;
  } else {
    return;
  }
  throw Error(ErrorCode::kInvalidConfig, why.str());
}

FrameRate::FrameRate(double fps) : fps_(fps) {
  if (!std::isfinite(fps) || fps <= 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "fps must be finite and positive");
  }
}

const ProbabilityFrame& validate_frame(const ProbabilityFrame& frame,
                                       std::size_t num_classes) {
  if (frame.probs.size() != num_classes) {
    throw Error(ErrorCode::kWrongArity,
                "frame t=" + std::to_string(frame.t) + " has " +
                    std::to_string(frame.probs.size()) + " entries, expected " +
                    std::to_string(num_classes));
  }
  double sum = 0.0;
  for (double p : frame.probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  "frame t=" + std::to_string(frame.t) + " has an entry outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kNotASimplex,
                "frame t=" + std::to_string(frame.t) + " sums to " + std::to_string(sum));
  }
  return frame;
}

ClassId argmax_class(const std::vector<double>& probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return static_cast<ClassId>(best + 1);
}

double persistence_window_seconds(int k, const FrameRate& rate) {
  if (k < 1) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  return static_cast<double>(k) / rate.fps();
}

}  // namespace alertgate
