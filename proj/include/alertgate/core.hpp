// Canonical domain types shared by every alertgate module.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alertgate {

enum class ErrorCode {
  kNotASimplex,
  kOutOfRange,
  kWrongArity,
  kNonMonotonicTime,
  kInvalidConfig,
  kInvalidMap,
  kNonContiguousLabels,
  kZeroDuration,
  kNoGtEvents,
  kInvalidSpec,
  kEmptyLog,
  kZeroCount,
  kDegenerateProbability,
  kLengthMismatch,
  kParse,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using ClassId = int;
using FrameIndex = std::int64_t;

inline constexpr std::size_t kNumClasses = 17;
inline constexpr ClassId kNormalClass = 1;
inline constexpr double kSimplexTolerance = 1e-6;

// The 17-class driver behavior taxonomy. Ids are 1-based.
struct BehaviorClass {
  ClassId id;
  std::string_view name;
};

const std::array<BehaviorClass, kNumClasses>& taxonomy();
std::string_view class_name(ClassId id);
bool is_valid_class(ClassId id);

// One timestep of classifier output: a probability simplex over the classes.
// probs[c - 1] holds the probability of class c.
struct ProbabilityFrame {
  FrameIndex t = 0;
  std::vector<double> probs;

  double prob(ClassId c) const { return probs[static_cast<std::size_t>(c - 1)]; }
  bool operator==(const ProbabilityFrame&) const = default;
};

struct LabeledFrame {
  FrameIndex t = 0;
  ClassId label = kNormalClass;

  bool operator==(const LabeledFrame&) const = default;
};

// A detected behavior instance over the closed frame interval [t_start, t_end].
struct AlertEvent {
  ClassId class_id = 0;
  FrameIndex t_start = 0;
  FrameIndex t_end = 0;

  FrameIndex length() const { return t_end - t_start + 1; }
  bool operator==(const AlertEvent&) const = default;
};

// Operating point of the temporal decision head.
struct GateConfig {
  double tau = 0.75;
  int k = 25;
  double tau_off = 0.60;
  int m = 3;
  int cooldown = 0;

  bool operator==(const GateConfig&) const = default;
};

// Throws Error(kInvalidConfig) when the config violates its invariants.
void validate(const GateConfig& cfg);

class FrameRate {
 public:
  // Throws Error(kInvalidConfig) unless fps is finite and positive.
  explicit FrameRate(double fps);

  double fps() const { return fps_; }
  double period_seconds() const { return 1.0 / fps_; }

 private:
  double fps_;
};

// Returns the frame unchanged if it is a valid simplex of the given arity.
const ProbabilityFrame& validate_frame(const ProbabilityFrame& frame,
                                       std::size_t num_classes = kNumClasses);

// Argmax with ties broken toward the lowest class id.
ClassId argmax_class(const std::vector<double>& probs);

double persistence_window_seconds(int k, const FrameRate& rate);

}  // namespace alertgate
