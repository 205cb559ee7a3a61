#include "alertgate/mapping.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "alertgate/io.hpp"
#include "json.hpp"

namespace alertgate {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidMap, what);
}

}  // namespace

ClassMap::ClassMap(std::vector<ClassId> targets, std::vector<std::string> target_names)
    : targets_(std::move(targets)), names_(std::move(target_names)) {
  if (targets_.empty()) invalid("class map has no source classes");
  if (names_.empty()) invalid("class map has no target categories");
  const auto n = static_cast<ClassId>(names_.size());
  for (ClassId t : targets_) {
    if (t < 1 || t > n) invalid("target id out of range: " + std::to_string(t));
  }
  if (targets_[0] != kNormalClass) invalid("Normal must map to the non-alerting category 1");
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) invalid("category names must be unique");
}

ClassMap ClassMap::identity(std::size_t num_classes) {
  std::vector<ClassId> targets(num_classes);
  std::vector<std::string> names(num_classes);
  for (std::size_t i = 0; i < num_classes; ++i) {
    targets[i] = static_cast<ClassId>(i + 1);
    names[i] = num_classes == kNumClasses ? std::string(taxonomy()[i].name)
                                          : "class " + std::to_string(i + 1);
  }
  return ClassMap(std::move(targets), std::move(names));
}

ClassId ClassMap::target(ClassId source) const {
  if (source < 1 || static_cast<std::size_t>(source) > targets_.size()) {
    throw Error(ErrorCode::kOutOfRange, "source class out of range: " + std::to_string(source));
  }
  return targets_[static_cast<std::size_t>(source - 1)];
}

const std::string& ClassMap::target_name(ClassId target) const {
  if (target < 1 || static_cast<std::size_t>(target) > names_.size()) {
    throw Error(ErrorCode::kOutOfRange, "category out of range: " + std::to_string(target));
  }
  return names_[static_cast<std::size_t>(target - 1)];
}

std::vector<ProbabilityFrame> apply_map_frames(const std::vector<ProbabilityFrame>& frames,
                                               const ClassMap& map) {
  std::vector<ProbabilityFrame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    if (f.probs.size() != map.num_sources()) {
      throw Error(ErrorCode::kWrongArity, "frame t=" + std::to_string(f.t) +
                                              " does not match the class map arity");
    }
    ProbabilityFrame mapped{f.t, std::vector<double>(map.num_targets(), 0.0)};
    for (std::size_t s = 0; s < f.probs.size(); ++s) {
      mapped.probs[static_cast<std::size_t>(map.targets()[s] - 1)] += f.probs[s];
    }
    out.push_back(std::move(mapped));
  }
  return out;
}

std::vector<AlertEvent> apply_map_events(const std::vector<AlertEvent>& events,
                                         const ClassMap& map) {
  std::vector<AlertEvent> relabeled;
  relabeled.reserve(events.size());
  for (const auto& e : events) {
    const ClassId c = map.target(e.class_id);
    if (c != kNormalClass) relabeled.push_back({c, e.t_start, e.t_end});
  }
  std::stable_sort(relabeled.begin(), relabeled.end(),
                   [](const AlertEvent& a, const AlertEvent& b) { return a.t_start < b.t_start; });

  std::vector<AlertEvent> merged;
  for (const auto& e : relabeled) {
    if (!merged.empty() && merged.back().class_id == e.class_id &&
        e.t_start <= merged.back().t_end + 1) {
      merged.back().t_end = std::max(merged.back().t_end, e.t_end);
    } else {
      merged.push_back(e);
    }
  }
  return merged;
}

std::vector<LabeledFrame> apply_map_labels(const std::vector<LabeledFrame>& labels,
                                           const ClassMap& map) {
  std::vector<LabeledFrame> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back({l.t, map.target(l.label)});
  return out;
}

ClassMap no_confounders_map() {
  ClassMap id = ClassMap::identity();
  std::vector<ClassId> targets = id.targets();
  targets[14 - 1] = 3;
  targets[15 - 1] = 5;
  return ClassMap(std::move(targets), id.target_names());
}

ClassMap deployment_groups_map() {
  // normal=1, phone=2, eating/drinking=3, smoking=4, not looking forward=5,
  // look-side=6, drowsiness=7
  std::vector<ClassId> targets{1, 2, 2, 2, 2, 3, 3, 4, 4, 5, 6, 5, 6, 5, 5, 7, 7};
  std::vector<std::string> names{"normal",   "phone usage", "eating/drinking",
                                 "smoking",  "not looking forward", "look-side",
                                 "drowsiness"};
  return ClassMap(std::move(targets), std::move(names));
}

ClassMap parse_class_map(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    invalid(std::string("map file is not valid JSON: ") + e.what());
  }
  try {
    const auto& targets_obj = j.at("targets");
    std::map<int, std::string> by_source;
    for (const auto& [key, value] : targets_obj.items()) {
      std::size_t used = 0;
      int source = std::stoi(key, &used);
      if (used != key.size()) invalid("source id is not an integer: " + key);
      by_source[source] = value.get<std::string>();
    }
    const auto n_sources = static_cast<int>(by_source.size());
    if (n_sources == 0) invalid("map has no targets");
    for (int s = 1; s <= n_sources; ++s) {
      if (!by_source.count(s)) invalid("source class " + std::to_string(s) + " has no target");
    }

    const std::string& normal_category = by_source.at(kNormalClass);
    const auto non_alerting = j.at("non_alerting").get<std::vector<std::string>>();
    if (non_alerting.size() != 1 || non_alerting.front() != normal_category) {
      invalid("non_alerting must list exactly the category that Normal maps to");
    }

    std::map<std::string, ClassId> ids;
    std::vector<std::string> names;
    if (j.contains("category_ids")) {
      for (const auto& [name, id] : j.at("category_ids").items()) ids[name] = id.get<ClassId>();
      names.resize(ids.size());
      for (const auto& [name, id] : ids) {
        if (id < 1 || id > static_cast<ClassId>(ids.size()) ||
            !names[static_cast<std::size_t>(id - 1)].empty()) {
          invalid("category_ids must number categories 1..n without repeats");
        }
        names[static_cast<std::size_t>(id - 1)] = name;
      }
    } else {
      ids[normal_category] = 1;
      names.push_back(normal_category);
      for (const auto& [source, name] : by_source) {
        if (ids.emplace(name, static_cast<ClassId>(names.size() + 1)).second) {
          names.push_back(name);
        }
      }
    }

    std::vector<ClassId> targets;
    for (const auto& [source, name] : by_source) {
      auto it = ids.find(name);
      if (it == ids.end()) invalid("category without an id: " + name);
      targets.push_back(it->second);
    }
    return ClassMap(std::move(targets), std::move(names));
  } catch (const json::exception& e) {
    invalid(std::string("malformed map file: ") + e.what());
  } catch (const std::invalid_argument&) {
    invalid("source ids must be integers");
  } catch (const std::out_of_range&) {
    invalid("source id out of range");
  }
}

ClassMap load_class_map(const std::filesystem::path& path) {
  return parse_class_map(io::read_text_file(path));
}

std::string class_map_to_json(const ClassMap& map) {
  json j;
  json targets = json::object();
  for (std::size_t s = 0; s < map.num_sources(); ++s) {
    targets[std::to_string(s + 1)] = map.target_name(map.targets()[s]);
  }
  json ids = json::object();
  for (std::size_t c = 0; c < map.num_targets(); ++c) {
    ids[map.target_names()[c]] = c + 1;
  }
  j["targets"] = targets;
  j["non_alerting"] = json::array({map.target_name(kNormalClass)});
  j["category_ids"] = ids;
  return j.dump(2);
}

ClassMap resolve_class_map(const std::string& name_or_path) {
  if (name_or_path == "identity") return ClassMap::identity();
  if (name_or_path == "no-confounders") return no_confounders_map();
  if (name_or_path == "deployment-groups") return deployment_groups_map();
  return load_class_map(name_or_path);
}

}  // namespace alertgate
