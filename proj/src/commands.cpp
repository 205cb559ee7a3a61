#include "alertgate/commands.hpp"

#include <fstream>
#include <sstream>

#include "alertgate/frame_metrics.hpp"
#include "alertgate/gate.hpp"
#include "alertgate/io.hpp"
#include "json.hpp"

namespace alertgate::cli {

using nlohmann::json;
namespace fs = std::filesystem;

Variant parse_variant(const std::string& name) {
  if (name == "gate") return Variant::kGate;
  if (name == "frame_only") return Variant::kFrameOnly;
  if (name == "majority") return Variant::kMajority;
  if (name == "ema") return Variant::kEma;
  throw UsageError("unknown variant: " + name);
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kGate: return "gate";
    case Variant::kFrameOnly: return "frame_only";
    case Variant::kMajority: return "majority";
    case Variant::kEma: return "ema";
  }
  return "gate";
}

void validate(const RunConfig& cfg) {
  switch (cfg.variant) {
    case Variant::kGate: validate(cfg.gate); break;
    case Variant::kMajority: validate(cfg.majority); break;
    case Variant::kEma: validate(cfg.ema); break;
    case Variant::kFrameOnly: break;
  }
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "eta must be in (0,1]");
  }
  FrameRate{cfg.fps};
}

RunConfig parse_run_config(const std::string& json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
    RunConfig c = std::move(base);
    if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
    if (j.contains("gate")) {
      const auto& g = j.at("gate");
      c.gate.tau = g.value("tau", c.gate.tau);
      c.gate.k = g.value("k", c.gate.k);
      c.gate.tau_off = g.value("tau_off", c.gate.tau_off);
      c.gate.m = g.value("m", c.gate.m);
      c.gate.cooldown = g.value("cooldown", c.gate.cooldown);
    }
    if (j.contains("majority")) c.majority.w = j.at("majority").value("w", c.majority.w);
    if (j.contains("ema")) {
      c.ema.lambda = j.at("ema").value("lambda", c.ema.lambda);
      c.ema.tau = j.at("ema").value("tau", c.ema.tau);
    }
    if (j.contains("map_file") && !j.at("map_file").is_null()) {
      c.map_file = j.at("map_file").get<std::string>();
    }
    if (j.contains("event_map_file") && !j.at("event_map_file").is_null()) {
      c.event_map_file = j.at("event_map_file").get<std::string>();
    }
    c.eta = j.value("eta", c.eta);
    c.fps = j.value("fps", c.fps);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed run config: ") + e.what());
  }
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["variant"] = variant_name(cfg.variant);
  j["gate"] = {{"tau", cfg.gate.tau},
               {"k", cfg.gate.k},
               {"tau_off", cfg.gate.tau_off},
               {"m", cfg.gate.m},
               {"cooldown", cfg.gate.cooldown}};
  j["majority"] = {{"w", cfg.majority.w}};
  j["ema"] = {{"lambda", cfg.ema.lambda}, {"tau", cfg.ema.tau}};
  j["map_file"] = cfg.map_file ? json(*cfg.map_file) : json(nullptr);
  j["event_map_file"] = cfg.event_map_file ? json(*cfg.event_map_file) : json(nullptr);
  j["eta"] = cfg.eta;
  j["fps"] = cfg.fps;
  return j.dump(2);
}

std::vector<AlertEvent> run_variant(const std::vector<ProbabilityFrame>& frames,
                                    const RunConfig& cfg) {
  switch (cfg.variant) {
    case Variant::kGate: return run_gate(frames, cfg.gate);
    case Variant::kFrameOnly: return frame_only_alerts(frames);
    case Variant::kMajority: return majority_vote_alerts(frames, cfg.majority);
    case Variant::kEma: return ema_alerts(frames, cfg.ema);
  }
  return {};
}

std::vector<AlertEvent> run_pipeline(const std::vector<ProbabilityFrame>& frames,
                                     const RunConfig& cfg) {
  validate(cfg);
  for (const auto& f : frames) validate_frame(f);
  std::vector<AlertEvent> events;
  if (cfg.map_file) {
    events = run_variant(apply_map_frames(frames, resolve_class_map(*cfg.map_file)), cfg);
  } else {
    events = run_variant(frames, cfg);
  }
  if (cfg.event_map_file) events = apply_map_events(events, resolve_class_map(*cfg.event_map_file));
  return events;
}

SimulateOutputs cmd_simulate(const StreamSpec& spec, const fs::path& out_dir) {
  const SimulatedStream stream = simulate_stream(spec);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string());

  SimulateOutputs out{out_dir / "frames.jsonl", out_dir / "labels.jsonl", out_dir / "spec.json"};
  std::ostringstream frames, labels;
  io::write_frames(frames, stream.frames);
  io::write_labels(labels, stream.labels);
  io::write_text_file(out.frames, frames.str());
  io::write_text_file(out.labels, labels.str());
  io::write_text_file(out.spec, spec_to_json(spec) + "\n");
  return out;
}

std::vector<AlertEvent> cmd_run(const fs::path& frames_path, const RunConfig& cfg,
                                const fs::path& out_path, EventFormat format) {
  const auto frames = io::read_frames_file(frames_path);
  const auto events = run_pipeline(frames, cfg);
  std::ostringstream out;
  if (format == EventFormat::kCsv) {
    io::write_events_csv(out, events);
  } else {
    io::write_events_jsonl(out, events);
  }
  io::write_text_file(out_path, out.str());
  return events;
}

EventMetrics cmd_eval(const fs::path& events_path, const fs::path& labels_path,
                      const EvalOptions& opts, const fs::path& metrics_out,
                      const std::optional<fs::path>& matches_out) {
  auto pred = io::read_events_file(events_path);
  auto labels = io::read_labels_file(labels_path);
  if (labels.empty()) throw Error(ErrorCode::kZeroDuration, "labels file is empty");
  const FrameRate rate(opts.fps);

  if (opts.map) {
    const ClassMap map = resolve_class_map(*opts.map);
    if (opts.map_apply != MapApply::kGt) pred = apply_map_events(pred, map);
    if (opts.map_apply != MapApply::kPred) labels = apply_map_labels(labels, map);
  }
  const auto gt = gt_events_from_labels(labels);
  const auto duration = labels.back().t - labels.front().t + 1;
  const EventMetrics metrics = evaluate_events(pred, gt, duration, rate, opts.eta);

  io::write_text_file(metrics_out,
                      metrics_csv_header() + "\n" + metrics_csv_row(opts.variant, metrics) + "\n");
  if (matches_out) {
    const MatchResult result = greedy_match(pred, gt, opts.eta);
    std::ostringstream m;
    m.precision(10);
    m << "pred_index,gt_index,class_id,pred_start,pred_end,gt_start,gt_end,tiou,ttd_frames\n";
    for (const auto& match : result.matches) {
      const auto& p = pred[match.pred];
      const auto& g = gt[match.gt];
      m << match.pred << ',' << match.gt << ',' << p.class_id << ',' << p.t_start << ','
        << p.t_end << ',' << g.t_start << ',' << g.t_end << ',' << match.tiou << ','
        << (p.t_start - g.t_start) << '\n';
    }
    io::write_text_file(*matches_out, m.str());
  }
  return metrics;
}

std::vector<AblationRow> run_ablation(const std::vector<StreamSpec>& streams,
                                      const GateConfig& gate, double eta) {
  validate(gate);
  const ClassMap confounder_free = no_confounders_map();
  std::vector<AblationRow> rows{
      {"No confounders + no temporal head", false, false, 0.0, 0.0},
      {"Confounders only", true, false, 0.0, 0.0},
      {"Temporal head only", false, true, 0.0, 0.0},
      {"Confounders + temporal head (full)", true, true, 0.0, 0.0},
  };

  std::vector<SimulatedStream> sims;
  sims.reserve(streams.size());
  for (const auto& spec : streams) sims.push_back(simulate_stream(spec));

  for (auto& row : rows) {
    std::vector<ClassId> pred_labels, gt_labels;
    std::size_t unmatched = 0;
    double minutes = 0.0;
    for (std::size_t s = 0; s < sims.size(); ++s) {
      const auto& sim = sims[s];
      const auto frames =
          row.confounders ? sim.frames : apply_map_frames(sim.frames, confounder_free);
      for (const auto& f : frames) pred_labels.push_back(argmax_class(f.probs));
      for (const auto& l : sim.labels) gt_labels.push_back(l.label);

      const auto pred = row.temporal_head ? run_gate(frames, gate) : frame_only_alerts(frames);
      const auto gt = gt_events_from_labels(sim.labels);
      const auto result = greedy_match(pred, gt, eta);
      for (std::size_t i : result.unmatched_pred) {
        if (pred[i].class_id != kNormalClass) ++unmatched;
      }
      minutes += static_cast<double>(sim.labels.size()) / streams[s].fps / 60.0;
    }
    if (minutes <= 0.0) throw Error(ErrorCode::kZeroDuration, "ablation has no frames");
    row.macro_f1 = frame_metrics(pred_labels, gt_labels).macro_f1;
    row.false_alerts_per_min = static_cast<double>(unmatched) / minutes;
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out.precision(10);
  out << "variant,macro_f1,false_alerts_per_min\n";
  for (const auto& r : rows) {
    out << io::csv_field(r.variant) << ',' << r.macro_f1 << ',' << r.false_alerts_per_min << '\n';
  }
  return out.str();
}

TimingReport cmd_profile(const fs::path& log_path, const std::optional<fs::path>& csv_out) {
  std::ifstream in(log_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + log_path.string());
  const TimingReport report = aggregate(read_timing_log(in));
  if (csv_out) io::write_text_file(*csv_out, report_csv(report));
  return report;
}

std::vector<StageTiming> profile_live(const StreamSpec& spec, const GateConfig& gate_cfg) {
  const SimulatedStream sim = simulate_stream(spec);
  std::vector<std::string> encoded;
  encoded.reserve(sim.frames.size());
  for (const auto& f : sim.frames) encoded.push_back(io::frame_to_json(f));

  const ClassMap map = ClassMap::identity();
  TemporalGate gate(gate_cfg);
  StageRecorder recorder;
  std::string sink;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    recorder.begin_frame(static_cast<FrameIndex>(i));

    recorder.begin(Stage::kCapture);
    const ProbabilityFrame frame = io::frame_from_json(encoded[i]);
    recorder.end(Stage::kCapture);

    recorder.begin(Stage::kPreprocess);
    validate_frame(frame);
    recorder.end(Stage::kPreprocess);

    recorder.begin(Stage::kPostprocess);
    const auto mapped = apply_map_frames({frame}, map);
    const auto event = gate.step(mapped.front());
    recorder.end(Stage::kPostprocess);

    recorder.begin(Stage::kIo);
    if (event) sink += io::event_to_json(*event) + "\n";
    recorder.end(Stage::kIo);

    recorder.end_frame();
  }
  return recorder.records();
}

}  // namespace alertgate::cli
