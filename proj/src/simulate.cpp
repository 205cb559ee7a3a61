#include "alertgate/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"

namespace alertgate {

using nlohmann::json;

namespace {

constexpr std::uint32_t kLabelStream = 1;
constexpr std::uint32_t kFrameStream = 2;

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  int uniform_int(int lo, int hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    return lo + std::min(static_cast<int>(uniform() * span), hi - lo);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidSpec, what); }

const SegmentModel& normal_entry(const StreamSpec& spec) {
  for (const auto& s : spec.segments) {
    if (s.class_id == kNormalClass) return s;
  }
  invalid("segment model needs a Normal entry");
}

std::vector<LabeledFrame> generate_labels(const StreamSpec& spec, Rng& rng) {
  const SegmentModel& gap = normal_entry(spec);
  std::vector<const SegmentModel*> behaviors;
  double total_weight = 0.0;
  for (const auto& s : spec.segments) {
    if (s.class_id != kNormalClass && s.weight > 0.0) {
      behaviors.push_back(&s);
      total_weight += s.weight;
    }
  }

  std::vector<LabeledFrame> labels;
  labels.reserve(static_cast<std::size_t>(spec.duration_frames));
  bool normal_turn = true;
  while (static_cast<std::int64_t>(labels.size()) < spec.duration_frames) {
    const SegmentModel* seg = &gap;
    if (!normal_turn) {
      double pick = rng.uniform() * total_weight;
      seg = behaviors.back();
      for (const auto* b : behaviors) {
        if (pick < b->weight) {
          seg = b;
          break;
        }
        pick -= b->weight;
      }
    }
    const int len = rng.uniform_int(seg->min_frames, seg->max_frames);
    const auto remaining = spec.duration_frames - static_cast<std::int64_t>(labels.size());
    // A behavior segment cut by the end of the stream below its minimum
    // length is emitted as Normal, so every behavior segment is >= min_frames.
    const ClassId label = remaining < seg->min_frames ? kNormalClass : seg->class_id;
    for (int i = 0; i < len && static_cast<std::int64_t>(labels.size()) < spec.duration_frames;
         ++i) {
      labels.push_back({static_cast<FrameIndex>(labels.size()), label});
    }
    normal_turn = !normal_turn;
  }
  return labels;
}

// Spike class for a frame with the given true class; 0 when the frame is left alone.
ClassId spike_target(const DisturbanceModel& d, ClassId truth, double draw) {
  std::vector<ClassId> options;
  for (const auto& [from, to] : d.spike_confusions) {
    if (from == truth) options.push_back(to);
  }
  if (options.empty()) {
    if (d.confusions_only) return 0;
    for (ClassId c = 1; c <= static_cast<ClassId>(kNumClasses); ++c) {
      if (c != truth) options.push_back(c);
    }
  }
  const auto idx = std::min(static_cast<std::size_t>(draw * static_cast<double>(options.size())),
                            options.size() - 1);
  return options[idx];
}

void softmax_inplace(std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

}  // namespace

void validate(const StreamSpec& spec) {
  if (spec.duration_frames < 1) invalid("duration_frames must be >= 1");
  if (!std::isfinite(spec.fps) || spec.fps <= 0.0) invalid("fps must be positive");
  if (spec.segments.empty()) invalid("segment model is empty");
  int normals = 0;
  double weight_sum = 0.0;
  for (const auto& s : spec.segments) {
    if (!is_valid_class(s.class_id)) invalid("segment class out of range");
    if (s.min_frames < 1 || s.max_frames < s.min_frames) invalid("bad segment duration range");
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) invalid("segment weights must be >= 0");
    if (s.class_id == kNormalClass) {
      ++normals;
    } else {
      weight_sum += s.weight;
    }
  }
  if (normals != 1) invalid("segment model needs exactly one Normal entry");
  if (!(weight_sum > 0.0)) invalid("behavior segment weights must have a positive sum");

  const auto& e = spec.emission;
  if (!std::isfinite(e.mu_true) || !std::isfinite(e.mu_other)) invalid("logit means must be finite");
  if (!(e.sigma >= 0.0) || !std::isfinite(e.sigma)) invalid("sigma must be >= 0");

  const auto& d = spec.disturbances;
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(d.spike_rate) || !rate_ok(d.dropout_rate)) invalid("rates must be in [0,1]");
  if (d.spike_min < 1 || d.spike_max < d.spike_min) invalid("bad spike length range");
  if (d.dropout_min < 1 || d.dropout_max < d.dropout_min) invalid("bad dropout length range");
  for (const auto& [from, to] : d.spike_confusions) {
    if (!is_valid_class(from) || !is_valid_class(to) || from == to) {
      invalid("bad spike confusion pair");
    }
  }
}

SimulatedStream simulate_stream(const StreamSpec& spec) {
  validate(spec);
  Rng label_rng(spec.seed, kLabelStream);
  Rng rng(spec.seed, kFrameStream);

  SimulatedStream out;
  out.labels = generate_labels(spec, label_rng);
  const auto n = out.labels.size();
  out.frames.reserve(n);
  out.in_spike.assign(n, false);
  out.in_dropout.assign(n, false);

  const auto& d = spec.disturbances;
  const auto& e = spec.emission;
  FrameIndex spike_until = -1, dropout_until = -1;
  double spike_draw = 0.0;
  std::vector<double> logits(kNumClasses);

  for (std::size_t i = 0; i < n; ++i) {
    const FrameIndex t = out.labels[i].t;
    const ClassId truth = out.labels[i].label;

    if (rng.bernoulli(d.spike_rate)) {
      ++out.spike_onsets;
      spike_until = t + rng.uniform_int(d.spike_min, d.spike_max) - 1;
      spike_draw = rng.uniform();
    }
    if (rng.bernoulli(d.dropout_rate)) {
      ++out.dropout_onsets;
      dropout_until = t + rng.uniform_int(d.dropout_min, d.dropout_max) - 1;
    }
    out.in_spike[i] = t <= spike_until;
    out.in_dropout[i] = t <= dropout_until;

    ClassId shown = truth;
    if (out.in_spike[i]) {
      if (ClassId s = spike_target(d, truth, spike_draw)) shown = s;
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const bool hot = static_cast<ClassId>(c + 1) == shown;
      logits[c] = (hot ? e.mu_true : e.mu_other) + e.sigma * rng.normal();
    }
    softmax_inplace(logits);
    if (out.in_dropout[i]) {
      for (double& p : logits) {
        p = (1.0 - kDropoutBlend) * p + kDropoutBlend / static_cast<double>(kNumClasses);
      }
    }
    out.frames.push_back({t, logits});
  }
  return out;
}

namespace {

StreamSpec base_scenario(std::string name, std::uint64_t seed) {
  StreamSpec s;
  s.name = std::move(name);
  s.seed = seed;
  s.fps = 25.0;
  s.duration_frames = 5 * 60 * 25;
  s.segments.push_back({kNormalClass, 75, 250, 0.0});
  for (ClassId c = 2; c <= static_cast<ClassId>(kNumClasses); ++c) {
    const bool confusable = c == 3 || c == 5 || c == 14 || c == 15;
    s.segments.push_back({c, 50, 250, confusable ? 2.0 : 1.0});
  }
  s.emission = {6.0, 0.0, 0.5};
  return s;
}

const std::vector<std::pair<ClassId, ClassId>> kConfounderPairs{
    {3, 14}, {14, 3}, {5, 15}, {15, 5}};

}  // namespace

StreamSpec named_scenario(const std::string& name, std::uint64_t seed) {
  StreamSpec s = base_scenario(name, seed);
  auto& d = s.disturbances;
  if (name == "clean") {
    return s;
  }
  if (name == "spiky") {
    s.emission.sigma = 0.7;
    d.spike_rate = 0.01;
    d.spike_min = 2;
    d.spike_max = 12;
    return s;
  }
  if (name == "occluded") {
    s.emission.sigma = 0.7;
    d.dropout_rate = 0.01;
    d.dropout_min = 3;
    d.dropout_max = 15;
    return s;
  }
  if (name == "confusable") {
    s.emission.sigma = 0.7;
    d.spike_rate = 0.03;
    d.spike_min = 2;
    d.spike_max = 12;
    d.spike_confusions = kConfounderPairs;
    d.confusions_only = true;
    return s;
  }
  if (name == "mixed") {
    s.emission.sigma = 0.7;
    d.spike_rate = 0.015;
    d.spike_min = 2;
    d.spike_max = 12;
    d.spike_confusions = kConfounderPairs;
    d.dropout_rate = 0.005;
    d.dropout_min = 3;
    d.dropout_max = 12;
    return s;
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown scenario: " + name);
}

std::vector<StreamSpec> scenario_suite(std::uint64_t seed) {
  std::vector<StreamSpec> suite;
  for (const char* name : {"clean", "spiky", "occluded", "confusable", "mixed"}) {
    suite.push_back(named_scenario(name, seed));
  }
  return suite;
}

std::string spec_to_json(const StreamSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["seed"] = spec.seed;
  j["fps"] = spec.fps;
  j["duration_frames"] = spec.duration_frames;
  json segs = json::array();
  for (const auto& s : spec.segments) {
    segs.push_back({{"class_id", s.class_id},
                    {"min_frames", s.min_frames},
                    {"max_frames", s.max_frames},
                    {"weight", s.weight}});
  }
  j["segment_model"] = segs;
  j["emission"] = {{"mu_true", spec.emission.mu_true},
                   {"mu_other", spec.emission.mu_other},
                   {"sigma", spec.emission.sigma}};
  const auto& d = spec.disturbances;
  json pairs = json::array();
  for (const auto& [from, to] : d.spike_confusions) pairs.push_back({from, to});
  j["disturbances"] = {{"spike_rate", d.spike_rate},
                       {"spike_len", {d.spike_min, d.spike_max}},
                       {"spike_confusions", pairs},
                       {"confusions_only", d.confusions_only},
                       {"dropout_rate", d.dropout_rate},
                       {"dropout_len", {d.dropout_min, d.dropout_max}},
                       {"dropout_blend", kDropoutBlend}};
  j["generator"] = "mt19937_64/seed_seq; 53-bit uniforms; Box-Muller normals";
  return j.dump(2);
}

StreamSpec spec_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    StreamSpec s;
    s.name = j.value("name", std::string("custom"));
    s.seed = j.at("seed").get<std::uint64_t>();
    s.fps = j.value("fps", 25.0);
    s.duration_frames = j.at("duration_frames").get<std::int64_t>();
    for (const auto& seg : j.at("segment_model")) {
      s.segments.push_back({seg.at("class_id").get<ClassId>(), seg.at("min_frames").get<int>(),
                            seg.at("max_frames").get<int>(), seg.value("weight", 1.0)});
    }
    if (j.contains("emission")) {
      const auto& e = j.at("emission");
      s.emission = {e.value("mu_true", 6.0), e.value("mu_other", 0.0), e.value("sigma", 0.5)};
    }
    if (j.contains("disturbances")) {
      const auto& d = j.at("disturbances");
      auto& out = s.disturbances;
      out.spike_rate = d.value("spike_rate", 0.0);
      if (d.contains("spike_len")) {
        out.spike_min = d.at("spike_len").at(0).get<int>();
        out.spike_max = d.at("spike_len").at(1).get<int>();
      }
      for (const auto& p : d.value("spike_confusions", json::array())) {
        out.spike_confusions.emplace_back(p.at(0).get<ClassId>(), p.at(1).get<ClassId>());
      }
      out.confusions_only = d.value("confusions_only", false);
      out.dropout_rate = d.value("dropout_rate", 0.0);
      if (d.contains("dropout_len")) {
        out.dropout_min = d.at("dropout_len").at(0).get<int>();
        out.dropout_max = d.at("dropout_len").at(1).get<int>();
      }
    }
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("malformed stream spec: ") + e.what());
  }
}

}  // namespace alertgate
