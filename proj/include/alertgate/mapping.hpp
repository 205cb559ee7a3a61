// Post-processing class maps from the 17 source classes to alert categories.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

// Total function from source class ids (1..num_sources) to target category ids
// (1..num_targets). Target 1 is the single non-alerting category and always
// contains the Normal class.
class ClassMap {
 public:
  // targets[s - 1] is the category of source class s.
  ClassMap(std::vector<ClassId> targets, std::vector<std::string> target_names);

  static ClassMap identity(std::size_t num_classes = kNumClasses);

  ClassId target(ClassId source) const;
  std::size_t num_sources() const { return targets_.size(); }
  std::size_t num_targets() const { return names_.size(); }
  const std::string& target_name(ClassId target) const;
  const std::vector<ClassId>& targets() const { return targets_; }
  const std::vector<std::string>& target_names() const { return names_; }

  bool operator==(const ClassMap&) const = default;

 private:
  std::vector<ClassId> targets_;
  std::vector<std::string> names_;
};

std::vector<ProbabilityFrame> apply_map_frames(const std::vector<ProbabilityFrame>& frames,
                                               const ClassMap& map);

// Relabels events, drops any that land on the non-alerting category, and
// merges same-category events that touch (gap of 0 frames).
std::vector<AlertEvent> apply_map_events(const std::vector<AlertEvent>& events,
                                         const ClassMap& map);

std::vector<LabeledFrame> apply_map_labels(const std::vector<LabeledFrame>& labels,
                                           const ClassMap& map);

// Confounder ablation: 14 -> 3 and 15 -> 5, identity elsewhere. Keeps all 17
// category ids so results remain comparable with the full taxonomy.
ClassMap no_confounders_map();

// Normal plus six display categories.
ClassMap deployment_groups_map();

// JSON map file:
//   {"targets": {"<source id>": "<category>"}, "non_alerting": ["<category>"],
//    "category_ids": {"<category>": <id>}}      (category_ids optional)
// Without category_ids, the non-alerting category is 1 and the rest are
// numbered by first appearance in ascending source order.
ClassMap parse_class_map(std::string_view json_text);
ClassMap load_class_map(const std::filesystem::path& path);
std::string class_map_to_json(const ClassMap& map);

// Accepts "identity", "no-confounders", "deployment-groups" or a file path.
ClassMap resolve_class_map(const std::string& name_or_path);

}  // namespace alertgate
