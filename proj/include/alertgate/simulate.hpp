// Seeded generator of labeled synthetic probability streams.
//
// Labels alternate Normal gaps and weighted-sampled behavior segments. Each
// frame's probabilities are softmax(logits) with mu_true on the true class,
// mu_other elsewhere and i.i.d. Gaussian noise on every logit. Spike windows
// hand the true-class logit to a confusable class; dropout windows blend the
// vector toward uniform with weight 0.9.
//
// Randomness comes from std::mt19937_64 seeded through std::seed_seq, with
// uniform and Gaussian variates derived in this module (53-bit uniforms,
// Box-Muller normals) so streams are identical across standard libraries.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

struct SegmentModel {
  ClassId class_id = kNormalClass;
  int min_frames = 1;
  int max_frames = 1;
  double weight = 1.0;  // ignored for the Normal entry

  bool operator==(const SegmentModel&) const = default;
};

struct EmissionModel {
  double mu_true = 6.0;
  double mu_other = 0.0;
  double sigma = 0.5;

  bool operator==(const EmissionModel&) const = default;
};

struct DisturbanceModel {
  double spike_rate = 0.0;  // onset probability per frame
  int spike_min = 1;
  int spike_max = 1;
  // (true class, spike class) pairs. Classes without a pair spike to a
  // uniformly drawn other class, unless confusions_only is set.
  std::vector<std::pair<ClassId, ClassId>> spike_confusions;
  bool confusions_only = false;
  double dropout_rate = 0.0;
  int dropout_min = 1;
  int dropout_max = 1;

  bool operator==(const DisturbanceModel&) const = default;
};

inline constexpr double kDropoutBlend = 0.9;

struct StreamSpec {
  std::string name = "custom";
  std::uint64_t seed = 0;
  double fps = 25.0;
  std::int64_t duration_frames = 0;
  std::vector<SegmentModel> segments;  // must contain one Normal entry
  EmissionModel emission;
  DisturbanceModel disturbances;

  bool operator==(const StreamSpec&) const = default;
};

struct SimulatedStream {
  std::vector<LabeledFrame> labels;
  std::vector<ProbabilityFrame> frames;
  std::vector<bool> in_spike;
  std::vector<bool> in_dropout;
  std::int64_t spike_onsets = 0;
  std::int64_t dropout_onsets = 0;
};

// Throws Error(kInvalidSpec) describing the first violated constraint.
void validate(const StreamSpec& spec);

SimulatedStream simulate_stream(const StreamSpec& spec);

// clean, spiky, occluded, confusable, mixed: 5 minutes at 25 fps each.
std::vector<StreamSpec> scenario_suite(std::uint64_t seed);
StreamSpec named_scenario(const std::string& name, std::uint64_t seed);

std::string spec_to_json(const StreamSpec& spec);
StreamSpec spec_from_json(const std::string& text);

}  // namespace alertgate
