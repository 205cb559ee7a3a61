// Command implementations behind the alertgate executable.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertgate/baselines.hpp"
#include "alertgate/core.hpp"
#include "alertgate/events.hpp"
#include "alertgate/mapping.hpp"
#include "alertgate/profile.hpp"
#include "alertgate/simulate.hpp"

namespace alertgate::cli {

// Bad flags or arguments; the executable maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { kGate, kFrameOnly, kMajority, kEma };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct RunConfig {
  Variant variant = Variant::kGate;
  GateConfig gate;
  MajorityConfig majority;
  EmaConfig ema;
  std::optional<std::string> map_file;        // applied to frames before alerting
  std::optional<std::string> event_map_file;  // applied to emitted events
  double eta = kDefaultEta;
  double fps = 25.0;
};

void validate(const RunConfig& cfg);
// Fields absent from the JSON keep the values already in `base`.
RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});
std::string run_config_to_json(const RunConfig& cfg);

// Alerting strategy only, on frames already in the target class space.
std::vector<AlertEvent> run_variant(const std::vector<ProbabilityFrame>& frames,
                                    const RunConfig& cfg);

// Frame map, then the variant, then the event map.
std::vector<AlertEvent> run_pipeline(const std::vector<ProbabilityFrame>& frames,
                                     const RunConfig& cfg);

enum class EventFormat { kJsonl, kCsv };

struct SimulateOutputs {
  std::filesystem::path frames;
  std::filesystem::path labels;
  std::filesystem::path spec;
};

SimulateOutputs cmd_simulate(const StreamSpec& spec, const std::filesystem::path& out_dir);

std::vector<AlertEvent> cmd_run(const std::filesystem::path& frames_path, const RunConfig& cfg,
                                const std::filesystem::path& out_path, EventFormat format);

// Which side of the comparison a class map is applied to during evaluation.
enum class MapApply { kBoth, kPred, kGt };

struct EvalOptions {
  double eta = kDefaultEta;
  double fps = 25.0;
  std::optional<std::string> map;
  MapApply map_apply = MapApply::kBoth;
  std::string variant = "run";
};

// Writes the metrics CSV (header + one row) and, if given, a per-match CSV.
EventMetrics cmd_eval(const std::filesystem::path& events_path,
                      const std::filesystem::path& labels_path, const EvalOptions& opts,
                      const std::filesystem::path& metrics_out,
                      const std::optional<std::filesystem::path>& matches_out);

struct AblationRow {
  std::string variant;
  bool confounders = true;
  bool temporal_head = true;
  double macro_f1 = 0.0;
  double false_alerts_per_min = 0.0;
};

// The 2x2 grid {confounder classes on/off} x {temporal head on/off}. Without
// confounder classes the predictions go through no_confounders_map() while
// the reference labels keep the full taxonomy. Without the temporal head
// alerts come from frame_only_alerts (K = 1). Metrics are pooled over streams.
std::vector<AblationRow> run_ablation(const std::vector<StreamSpec>& streams,
                                      const GateConfig& gate, double eta = kDefaultEta);
std::string ablation_csv(const std::vector<AblationRow>& rows);

TimingReport cmd_profile(const std::filesystem::path& log_path,
                         const std::optional<std::filesystem::path>& csv_out);

// Times the post-model pipeline on a simulated stream: capture = decoding a
// JSONL frame, preprocess = validation, inference = 0 (no model), postprocess =
// class map + gate step, io = event serialization.
std::vector<StageTiming> profile_live(const StreamSpec& spec, const GateConfig& gate);

}  // namespace alertgate::cli
