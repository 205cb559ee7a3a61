// Stage-aware runtime profiling: end-to-end latency decomposition,
// throughput and tail statistics. All durations are in milliseconds.
#pragma once

#include <array>
#include <chrono>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

enum class Stage { kCapture, kPreprocess, kInference, kPostprocess, kIo };
inline constexpr std::size_t kNumStages = 5;

struct StageTiming {
  FrameIndex t = 0;
  double cap_ms = 0.0;
  double pre_ms = 0.0;
  double inf_ms = 0.0;
  double post_ms = 0.0;
  double io_ms = 0.0;

  double stage(Stage s) const;
  double& stage(Stage s);
  bool operator==(const StageTiming&) const = default;
};

struct LatencySummary {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

struct TimingReport {
  std::array<LatencySummary, kNumStages> stages{};
  LatencySummary e2e;
  double fps = 0.0;
  double jitter_ms = 0.0;  // p95 - median of e2e
  std::size_t frames = 0;
};

std::string_view stage_label(Stage s);

// Throws kOutOfRange for negative or non-finite stage values.
void validate(const StageTiming& rec);

double e2e_latency(const StageTiming& rec);

// Nearest-rank percentile: the ceil(q * n)-th smallest sample, q in (0, 1].
// The sample is taken by value and partially reordered.
double nearest_rank(std::vector<double> sample, double q);

LatencySummary summarize(const std::vector<double>& sample_ms);

// Throws kEmptyLog for an empty log.
TimingReport aggregate(const std::vector<StageTiming>& records);

double effective_window_report(const GateConfig& cfg, const TimingReport& report);

// Timing log JSONL: {"t":..,"cap_ms":..,"pre_ms":..,"inf_ms":..,"post_ms":..,"io_ms":..}
std::vector<StageTiming> read_timing_log(std::istream& in);
std::string timing_to_json(const StageTiming& rec);

// CSV columns stage,mean_ms,median_ms,p95_ms,fps,jitter_ms; fps and jitter are
// filled on the total row only.
std::string report_csv(const TimingReport& report);
// Fixed-width table with one row per stage and a Total row.
std::string report_table(const TimingReport& report);

// Per-frame recorder for live pipelines, backed by a monotonic clock.
class StageRecorder {
 public:
  using Clock = std::chrono::steady_clock;

  void begin_frame(FrameIndex t);
  void begin(Stage s);
  void end(Stage s);
  void end_frame();

  const std::vector<StageTiming>& records() const { return records_; }

 private:
  StageTiming current_;
  Clock::time_point started_{};
  bool in_frame_ = false;
  bool in_stage_ = false;
  Stage stage_ = Stage::kCapture;
  std::vector<StageTiming> records_;
};

}  // namespace alertgate
