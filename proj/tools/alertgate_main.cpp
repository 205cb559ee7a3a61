// alertgate: simulate, gate, evaluate, ablate and profile alert streams.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alertgate/commands.hpp"
#include "alertgate/io.hpp"
#include "alertgate/loss.hpp"

namespace {

using namespace alertgate;
namespace fs = std::filesystem;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::uint64_t seed = 7;
  std::optional<double> fps;
  std::optional<std::string> config;
};

struct GateFlags {
  std::optional<double> tau, tau_off, ema_lambda, ema_tau, eta;
  std::optional<int> k, m, cooldown, window;
  std::optional<std::string> variant, frame_map, event_map;
};

void add_gate_flags(CLI::App* cmd, GateFlags& f) {
  cmd->add_option("--tau", f.tau, "Trigger confidence threshold");
  cmd->add_option("--k", f.k, "Persistence window in frames");
  cmd->add_option("--tau-off", f.tau_off, "Release threshold");
  cmd->add_option("--m", f.m, "Release persistence in frames");
  cmd->add_option("--cooldown", f.cooldown, "Per-class cooldown in frames");
}

cli::RunConfig build_config(const GlobalOptions& g, const GateFlags& f) {
  cli::RunConfig cfg;
  if (g.config) cfg = cli::parse_run_config(io::read_text_file(*g.config), cfg);
  if (f.variant) cfg.variant = cli::parse_variant(*f.variant);
  if (f.tau) cfg.gate.tau = *f.tau;
  if (f.k) cfg.gate.k = *f.k;
  if (f.tau_off) cfg.gate.tau_off = *f.tau_off;
  if (f.m) cfg.gate.m = *f.m;
  if (f.cooldown) cfg.gate.cooldown = *f.cooldown;
  if (f.window) cfg.majority.w = *f.window;
  if (f.ema_lambda) cfg.ema.lambda = *f.ema_lambda;
  if (f.ema_tau) cfg.ema.tau = *f.ema_tau;
  if (f.frame_map) cfg.map_file = *f.frame_map;
  if (f.event_map) cfg.event_map_file = *f.event_map;
  if (f.eta) cfg.eta = *f.eta;
  if (g.fps) cfg.fps = *g.fps;
  try {
    cli::validate(cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidConfig) throw;
    throw cli::UsageError(e.what());
  }
  return cfg;
}

StreamSpec load_stream_spec(const std::optional<std::string>& scenario,
                            const std::optional<std::string>& spec_file, std::uint64_t seed) {
  if (scenario && spec_file) throw cli::UsageError("use either --scenario or --spec, not both");
  if (spec_file) return spec_from_json(io::read_text_file(*spec_file));
  const std::string name = scenario.value_or("clean");
  try {
    return named_scenario(name, seed);
  } catch (const Error&) {
    throw cli::UsageError("unknown scenario: " + name +
                          " (expected clean, spiky, occluded, confusable or mixed)");
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"Alert gating and evaluation for per-frame behavior probability streams"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed for simulated streams");
  app.add_option("--fps", global.fps, "Frame rate of the stream");
  app.add_option("--config", global.config, "JSON run configuration file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic labeled stream");
  std::optional<std::string> sim_scenario, sim_spec;
  std::string sim_out = ".";
  simulate->add_option("--scenario", sim_scenario,
                       "Named scenario: clean, spiky, occluded, confusable, mixed");
  simulate->add_option("--spec", sim_spec, "Stream spec JSON file");
  simulate->add_option("--out", sim_out, "Output directory");

  // run
  auto* run = app.add_subcommand("run", "Convert a frame stream into alert events");
  std::string run_frames, run_out = "events.jsonl", run_format = "jsonl";
  GateFlags run_flags;
  run->add_option("--frames", run_frames, "Frames JSONL file")->required();
  run->add_option("--out", run_out, "Output events file");
  run->add_option("--format", run_format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  run->add_option("--variant", run_flags.variant, "gate, frame_only, majority or ema");
  add_gate_flags(run, run_flags);
  run->add_option("--window", run_flags.window, "Majority vote window in frames");
  run->add_option("--lambda", run_flags.ema_lambda, "EMA factor");
  run->add_option("--ema-tau", run_flags.ema_tau, "EMA alert threshold");
  run->add_option("--frame-map", run_flags.frame_map,
                  "Class map applied to frames (preset name or JSON file)");
  run->add_option("--event-map", run_flags.event_map,
                  "Class map applied to emitted events (preset name or JSON file)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score alert events against frame labels");
  std::string eval_events, eval_labels, eval_out = "metrics.csv", eval_apply = "both";
  std::optional<std::string> eval_matches, eval_map, eval_variant;
  std::optional<double> eval_eta;
  eval->add_option("--events", eval_events, "Events file (JSONL or CSV)")->required();
  eval->add_option("--labels", eval_labels, "Labels JSONL file")->required();
  eval->add_option("--eta", eval_eta, "tIoU matching threshold");
  eval->add_option("--out", eval_out, "Metrics CSV output");
  eval->add_option("--matches", eval_matches, "Per-match CSV output");
  eval->add_option("--map", eval_map, "Class map (preset name or JSON file)");
  eval->add_option("--map-apply", eval_apply, "both, pred or gt")
      ->check(CLI::IsMember({"both", "pred", "gt"}));
  eval->add_option("--variant-name", eval_variant, "Label for the metrics row");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Confounder x temporal-head ablation grid");
  std::vector<std::string> abl_scenarios;
  std::string abl_out = "ablation.csv";
  GateFlags abl_flags;
  std::optional<double> abl_eta;
  ablate->add_option("--scenario", abl_scenarios, "Scenario(s) to include (default: all)");
  ablate->add_option("--out", abl_out, "Output CSV");
  ablate->add_option("--eta", abl_eta, "tIoU matching threshold");
  add_gate_flags(ablate, abl_flags);

  // profile
  auto* profile = app.add_subcommand("profile", "Summarize a per-stage timing log");
  std::optional<std::string> prof_log, prof_csv, prof_scenario;
  bool prof_live = false;
  profile->add_option("--log", prof_log, "Timing log JSONL");
  profile->add_option("--csv", prof_csv, "Report CSV output");
  profile->add_flag("--live", prof_live, "Time this pipeline on a simulated stream");
  profile->add_option("--scenario", prof_scenario, "Scenario for --live (default clean)");

  // loss-check
  auto* loss_check = app.add_subcommand("loss-check", "Evaluate the focal loss numerically");
  double lc_p = 0.5, lc_alpha = 1.0, lc_gamma = loss::kDefaultGamma, lc_cap = loss::kDefaultWeightCap;
  std::vector<std::int64_t> lc_counts;
  loss_check->add_option("--p", lc_p, "Probability of the true class");
  loss_check->add_option("--alpha", lc_alpha, "Class weight");
  loss_check->add_option("--gamma", lc_gamma, "Focusing parameter");
  loss_check->add_option("--counts", lc_counts, "Per-class sample counts for weights")->delimiter(',');
  loss_check->add_option("--cap", lc_cap, "Class weight cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) {
      const StreamSpec spec = load_stream_spec(sim_scenario, sim_spec, global.seed);
      StreamSpec effective = spec;
      if (global.fps) effective.fps = *global.fps;
      const auto out = cli::cmd_simulate(effective, sim_out);
      std::cout << "wrote " << out.frames.string() << ", " << out.labels.string() << ", "
                << out.spec.string() << '\n';
    } else if (*run) {
      const auto cfg = build_config(global, run_flags);
      const auto format = run_format == "csv" ? cli::EventFormat::kCsv : cli::EventFormat::kJsonl;
      const auto events = cli::cmd_run(run_frames, cfg, run_out, format);
      std::cout << events.size() << " events (" << cli::variant_name(cfg.variant) << ") -> "
                << run_out << '\n';
    } else if (*eval) {
      cli::EvalOptions opts;
      cli::RunConfig base;
      if (global.config) base = cli::parse_run_config(io::read_text_file(*global.config));
      opts.eta = eval_eta.value_or(base.eta);
      opts.fps = global.fps.value_or(base.fps);
      opts.map = eval_map;
      opts.map_apply = eval_apply == "pred" ? cli::MapApply::kPred
                       : eval_apply == "gt" ? cli::MapApply::kGt
                                            : cli::MapApply::kBoth;
      opts.variant = eval_variant.value_or("run");
      std::optional<fs::path> matches;
      if (eval_matches) matches = *eval_matches;
      const auto m = cli::cmd_eval(eval_events, eval_labels, opts, eval_out, matches);
      std::cout << metrics_csv_header() << '\n' << metrics_csv_row(opts.variant, m) << '\n';
    } else if (*ablate) {
      GateFlags flags = abl_flags;
      flags.eta = abl_eta;
      const auto cfg = build_config(global, flags);
      std::vector<StreamSpec> streams;
      if (abl_scenarios.empty()) {
        streams = scenario_suite(global.seed);
      } else {
        for (const auto& name : abl_scenarios) {
          streams.push_back(load_stream_spec(name, std::nullopt, global.seed));
        }
      }
      const auto rows = cli::run_ablation(streams, cfg.gate, cfg.eta);
      const auto csv = cli::ablation_csv(rows);
      io::write_text_file(abl_out, csv);
      std::cout << csv;
    } else if (*profile) {
      TimingReport report;
      if (prof_live) {
        const StreamSpec spec = load_stream_spec(prof_scenario, std::nullopt, global.seed);
        cli::RunConfig cfg;
        if (global.config) cfg = cli::parse_run_config(io::read_text_file(*global.config));
        report = aggregate(cli::profile_live(spec, cfg.gate));
        if (prof_csv) io::write_text_file(*prof_csv, report_csv(report));
      } else {
        if (!prof_log) throw cli::UsageError("profile needs --log or --live");
        std::optional<fs::path> csv;
        if (prof_csv) csv = *prof_csv;
        report = cli::cmd_profile(*prof_log, csv);
      }
      std::cout << report_table(report);
    } else if (*loss_check) {
      std::cout << std::setprecision(12);
      const double value = loss::focal_loss(lc_p, lc_alpha, lc_gamma);
      const double grad = loss::focal_loss_grad(lc_p, lc_alpha, lc_gamma);
      const double h = 1e-6 * std::max(1.0, std::abs(lc_p));
      double fd = 0.0;
      if (lc_p - h > 0.0 && lc_p + h <= 1.0) {
        fd = (loss::focal_loss(lc_p + h, lc_alpha, lc_gamma) -
              loss::focal_loss(lc_p - h, lc_alpha, lc_gamma)) / (2.0 * h);
      }
      std::cout << "p=" << lc_p << " alpha=" << lc_alpha << " gamma=" << lc_gamma << '\n'
                << "loss=" << value << '\n'
                << "dloss_dp=" << grad << '\n'
                << "dloss_dp_central_fd=" << fd << '\n';
      if (!lc_counts.empty()) {
        const auto w = loss::class_weights(lc_counts, lc_cap);
        std::cout << "weight_normalization=N/(C*n_c) cap=" << w.cap << '\n';
        for (std::size_t c = 0; c < w.alpha.size(); ++c) {
          std::cout << "alpha[" << (c + 1) << "]=" << w.alpha[c] << '\n';
        }
      }
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_main(argc, argv); }
