#include <gtest/gtest.h>

#include <sstream>

#include "alertgate/commands.hpp"
#include "alertgate/gate.hpp"
#include "alertgate/io.hpp"
#include "cli_helpers.hpp"

namespace alertgate {
namespace {

using testing::quoted;
using testing::run_cli;
using testing::ScratchDir;

std::string events_jsonl(const std::vector<AlertEvent>& events) {
  std::ostringstream out;
  io::write_events_jsonl(out, events);
  return out.str();
}

TEST(Commands, RunMatchesLibraryComposition) {
  ScratchDir dir("compose");
  const auto spec = named_scenario("mixed", 7);
  cli::cmd_simulate(spec, dir.path());
  const auto frames = io::read_frames_file(dir / "frames.jsonl");

  cli::RunConfig cfg;
  cfg.map_file = "no-confounders";
  cfg.event_map_file = "deployment-groups";
  cli::cmd_run(dir / "frames.jsonl", cfg, dir / "events.jsonl", cli::EventFormat::kJsonl);

  const auto expected = apply_map_events(
      run_gate(apply_map_frames(frames, no_confounders_map()), cfg.gate), deployment_groups_map());
  EXPECT_EQ(io::read_text_file(dir / "events.jsonl"), events_jsonl(expected));

  // Same thing through the executable.
  ASSERT_EQ(run_cli("run --frames " + quoted(dir / "frames.jsonl") + " --out " +
                    quoted(dir / "cli.jsonl") +
                    " --frame-map no-confounders --event-map deployment-groups"),
            0);
  EXPECT_EQ(io::read_text_file(dir / "cli.jsonl"), events_jsonl(expected));
}

TEST(Commands, SimulateIsDeterministic) {
  ScratchDir dir("simulate");
  ASSERT_EQ(run_cli("simulate --scenario mixed --seed 7 --out " + quoted(dir / "a")), 0);
  ASSERT_EQ(run_cli("simulate --scenario mixed --seed 7 --out " + quoted(dir / "b")), 0);
  for (const char* f : {"frames.jsonl", "labels.jsonl", "spec.json"}) {
    EXPECT_EQ(io::read_text_file(dir / (std::string("a/") + f)),
              io::read_text_file(dir / (std::string("b/") + f)))
        << f;
  }
  EXPECT_EQ(spec_from_json(io::read_text_file(dir / "a/spec.json")), named_scenario("mixed", 7));
}

TEST(Commands, ExitCodes) {
  ScratchDir dir("exit");
  EXPECT_EQ(run_cli("simulate --scenario foggy --out " + quoted(dir.path())), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("run"), 2);  // --frames is required
  EXPECT_EQ(run_cli("--help"), 0);

  io::write_text_file(dir / "bad.jsonl", "{\"t\":0,\"probs\":[1.0]}\n");
  EXPECT_EQ(run_cli("run --frames " + quoted(dir / "bad.jsonl") + " --out " +
                    quoted(dir / "e.jsonl")),
            1);
  EXPECT_EQ(run_cli("run --frames " + quoted(dir / "missing.jsonl") + " --out " +
                    quoted(dir / "e.jsonl")),
            1);
  io::write_text_file(dir / "empty.jsonl", "");
  EXPECT_EQ(run_cli("run --frames " + quoted(dir / "empty.jsonl") + " --variant nope --out " +
                    quoted(dir / "e.jsonl")),
            2);
  EXPECT_EQ(run_cli("run --frames " + quoted(dir / "empty.jsonl") + " --tau 2 --out " +
                    quoted(dir / "e.jsonl")),
            2);
  EXPECT_EQ(run_cli("profile --log " + quoted(dir / "empty.jsonl")), 1);
  EXPECT_EQ(run_cli("profile"), 2);
  EXPECT_EQ(run_cli("loss-check --p 0"), 1);
  EXPECT_EQ(run_cli("loss-check --p 0.5 --gamma 1.5"), 0);
}

TEST(Commands, EmptyFramesGiveEmptyEvents) {
  ScratchDir dir("empty");
  io::write_text_file(dir / "frames.jsonl", "");
  ASSERT_EQ(run_cli("run --frames " + quoted(dir / "frames.jsonl") + " --out " +
                    quoted(dir / "events.jsonl")),
            0);
  EXPECT_EQ(io::read_text_file(dir / "events.jsonl"), "");
}

TEST(Commands, CleanScenarioOneEventPerSegment) {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto sim = simulate_stream(named_scenario("clean", seed));
    const auto gt = gt_events_from_labels(sim.labels);
    const auto events = run_gate(sim.frames, GateConfig{});
    ASSERT_EQ(events.size(), gt.size()) << "seed " << seed;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      EXPECT_EQ(events[i].class_id, gt[i].class_id);
      EXPECT_LE(std::abs(events[i].t_start - gt[i].t_start), 2);
    }
    const auto m = evaluate_events(events, gt, static_cast<std::int64_t>(sim.labels.size()),
                                   FrameRate(25.0));
    EXPECT_EQ(m.matched, gt.size());
    EXPECT_LE(std::abs(*m.mean_ttd_frames), 2.0);
  }
}

TEST(Commands, FrameOnlyFiresMoreOnSpikyStream) {
  const auto sim = simulate_stream(named_scenario("spiky", 7));
  cli::RunConfig cfg;
  const auto gate = cli::run_pipeline(sim.frames, cfg);
  cfg.variant = cli::Variant::kFrameOnly;
  const auto frame_only = cli::run_pipeline(sim.frames, cfg);
  EXPECT_GT(frame_only.size(), gate.size());
}

TEST(Commands, EvalPerfectPredictions) {
  ScratchDir dir("eval");
  const auto spec = named_scenario("clean", 7);
  cli::cmd_simulate(spec, dir.path());
  const auto gt = gt_events_from_labels(io::read_labels_file(dir / "labels.jsonl"));
  io::write_text_file(dir / "events.jsonl", events_jsonl(gt));
  const auto m = cli::cmd_eval(dir / "events.jsonl", dir / "labels.jsonl", {},
                               dir / "metrics.csv", dir / "matches.csv");
  EXPECT_DOUBLE_EQ(m.false_alerts_per_min, 0.0);
  EXPECT_DOUBLE_EQ(*m.fragmentation, 1.0);
  EXPECT_DOUBLE_EQ(*m.mean_ttd_frames, 0.0);
  const auto csv = io::read_text_file(dir / "metrics.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), metrics_csv_header());

  io::write_text_file(dir / "none.jsonl", "");
  const auto none = cli::cmd_eval(dir / "none.jsonl", dir / "labels.jsonl", {},
                                  dir / "metrics2.csv", std::nullopt);
  EXPECT_FALSE(none.mean_ttd_frames.has_value());
  EXPECT_DOUBLE_EQ(none.false_alerts_per_min, 0.0);

  io::write_text_file(dir / "nolabels.jsonl", "");
  EXPECT_THROW(cli::cmd_eval(dir / "none.jsonl", dir / "nolabels.jsonl", {}, dir / "m3.csv",
                             std::nullopt),
               Error);
}

TEST(Commands, EvalThroughCliAcceptsCsvEvents) {
  ScratchDir dir("evalcli");
  ASSERT_EQ(run_cli("simulate --scenario clean --out " + quoted(dir.path())), 0);
  ASSERT_EQ(run_cli("run --frames " + quoted(dir / "frames.jsonl") + " --format csv --out " +
                    quoted(dir / "events.csv")),
            0);
  ASSERT_EQ(run_cli("eval --events " + quoted(dir / "events.csv") + " --labels " +
                    quoted(dir / "labels.jsonl") + " --out " + quoted(dir / "metrics.csv")),
            0);
  const auto csv = io::read_text_file(dir / "metrics.csv");
  EXPECT_NE(csv.find("\nrun,0,"), std::string::npos) << csv;
}

TEST(Commands, AblationHasFourRows) {
  const auto rows =
      cli::run_ablation({named_scenario("mixed", 7)}, GateConfig{}, kDefaultEta);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].variant, "No confounders + no temporal head");
  EXPECT_EQ(rows[3].variant, "Confounders + temporal head (full)");
  const auto csv = cli::ablation_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "variant,macro_f1,false_alerts_per_min");
  EXPECT_LT(rows[2].false_alerts_per_min, rows[0].false_alerts_per_min);
}

TEST(Commands, RunConfigJsonRoundTrip) {
  cli::RunConfig cfg;
  cfg.variant = cli::Variant::kEma;
  cfg.gate = {0.8, 12, 0.5, 4, 30};
  cfg.ema = {0.7, 0.6};
  cfg.majority = {9};
  cfg.map_file = "deployment-groups";
  cfg.eta = 0.5;
  cfg.fps = 16.0;
  const auto back = cli::parse_run_config(cli::run_config_to_json(cfg));
  EXPECT_EQ(cli::run_config_to_json(back), cli::run_config_to_json(cfg));
  EXPECT_EQ(back.gate, cfg.gate);
  EXPECT_THROW(cli::parse_run_config("[1,"), Error);
  EXPECT_THROW(cli::parse_variant("median"), cli::UsageError);
}

TEST(Commands, ProfileLiveAndLog) {
  const auto records = cli::profile_live(named_scenario("clean", 7), GateConfig{});
  ASSERT_EQ(records.size(), 7500u);
  for (const auto& r : records) EXPECT_EQ(r.inf_ms, 0.0);
  ScratchDir dir("profile");
  std::string log;
  for (FrameIndex t = 0; t < 50; ++t) log += timing_to_json({t, 6, 4, 38, 5, 4}) + "\n";
  io::write_text_file(dir / "log.jsonl", log);
  const auto report = cli::cmd_profile(dir / "log.jsonl", dir / "report.csv");
  EXPECT_DOUBLE_EQ(report.e2e.median_ms, 57.0);
  EXPECT_EQ(run_cli("profile --log " + quoted(dir / "log.jsonl")), 0);
}

}  // namespace
}  // namespace alertgate
