#include "alertgate/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace alertgate {

using nlohmann::json;

namespace {

constexpr std::array<Stage, kNumStages> kStages{Stage::kCapture, Stage::kPreprocess,
                                                Stage::kInference, Stage::kPostprocess,
                                                Stage::kIo};

constexpr std::array<const char*, kNumStages> kStageKeys{"capture", "preprocess", "inference",
                                                         "postprocess", "io"};

}  // namespace

double StageTiming::stage(Stage s) const {
  switch (s) {
    case Stage::kCapture: return cap_ms;
    case Stage::kPreprocess: return pre_ms;
    case Stage::kInference: return inf_ms;
    case Stage::kPostprocess: return post_ms;
    case Stage::kIo: return io_ms;
  }
  return 0.0;
}

double& StageTiming::stage(Stage s) {
  switch (s) {
    case Stage::kCapture: return cap_ms;
    case Stage::kPreprocess: return pre_ms;
    case Stage::kInference: return inf_ms;
    case Stage::kPostprocess: return post_ms;
    case Stage::kIo: break;
  }
  return io_ms;
}

std::string_view stage_label(Stage s) {
  switch (s) {
    case Stage::kCapture: return "Capture + decode";
    case Stage::kPreprocess: return "Preprocess";
    case Stage::kInference: return "Inference";
    case Stage::kPostprocess: return "Postprocess";
    case Stage::kIo: return "Overlay / I/O";
  }
  return "";
}

void validate(const StageTiming& rec) {
  for (Stage s : kStages) {
    const double v = rec.stage(s);
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kOutOfRange,
                  "stage timing for t=" + std::to_string(rec.t) + " is negative or not finite");
    }
  }
}

double e2e_latency(const StageTiming& rec) {
  return rec.cap_ms + rec.pre_ms + rec.inf_ms + rec.post_ms + rec.io_ms;
}

double nearest_rank(std::vector<double> sample, double q) {
  if (sample.empty()) throw Error(ErrorCode::kEmptyLog, "percentile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "quantile must be in (0,1]");
  const auto n = sample.size();
  // q * n can land a hair above an integer (0.95 is not representable), which
  // would push ceil one rank too far.
  const double x = q * static_cast<double>(n);
  double r = std::ceil(x);
  if (r - x > 1.0 - 1e-9) r -= 1.0;
  auto rank = static_cast<std::size_t>(r);
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = sample.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(sample.begin(), nth, sample.end());
  return *nth;
}

LatencySummary summarize(const std::vector<double>& sample_ms) {
  if (sample_ms.empty()) throw Error(ErrorCode::kEmptyLog, "no samples");
  LatencySummary s;
  s.mean_ms = std::accumulate(sample_ms.begin(), sample_ms.end(), 0.0) /
              static_cast<double>(sample_ms.size());
  s.median_ms = nearest_rank(sample_ms, 0.5);
  s.p95_ms = nearest_rank(sample_ms, 0.95);
  return s;
}

TimingReport aggregate(const std::vector<StageTiming>& records) {
  if (records.empty()) throw Error(ErrorCode::kEmptyLog, "timing log is empty");
  TimingReport report;
  for (const auto& r : records) validate(r);
  report.frames = records.size();
  std::vector<double> column(records.size());
  for (std::size_t s = 0; s < kNumStages; ++s) {
    for (std::size_t i = 0; i < records.size(); ++i) column[i] = records[i].stage(kStages[s]);
    report.stages[s] = summarize(column);
  }
  for (std::size_t i = 0; i < records.size(); ++i) column[i] = e2e_latency(records[i]);
  report.e2e = summarize(column);
  if (report.e2e.median_ms > 0.0) report.fps = 1000.0 / report.e2e.median_ms;
  report.jitter_ms = report.e2e.p95_ms - report.e2e.median_ms;
  return report;
}

double effective_window_report(const GateConfig& cfg, const TimingReport& report) {
  validate(cfg);
  return persistence_window_seconds(cfg.k, FrameRate(report.fps));
}

std::vector<StageTiming> read_timing_log(std::istream& in) {
  std::vector<StageTiming> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      StageTiming r;
      r.t = j.at("t").get<FrameIndex>();
      r.cap_ms = j.at("cap_ms").get<double>();
      r.pre_ms = j.at("pre_ms").get<double>();
      r.inf_ms = j.at("inf_ms").get<double>();
      r.post_ms = j.at("post_ms").get<double>();
      r.io_ms = j.at("io_ms").get<double>();
      validate(r);
      out.push_back(r);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string timing_to_json(const StageTiming& rec) {
  json j;
  j["t"] = rec.t;
  j["cap_ms"] = rec.cap_ms;
  j["pre_ms"] = rec.pre_ms;
  j["inf_ms"] = rec.inf_ms;
  j["post_ms"] = rec.post_ms;
  j["io_ms"] = rec.io_ms;
  return j.dump();
}

std::string report_csv(const TimingReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "stage,mean_ms,median_ms,p95_ms,fps,jitter_ms\n";
  for (std::size_t s = 0; s < kNumStages; ++s) {
    const auto& st = report.stages[s];
    out << kStageKeys[s] << ',' << st.mean_ms << ',' << st.median_ms << ',' << st.p95_ms
        << ",,\n";
  }
  out << "total," << report.e2e.mean_ms << ',' << report.e2e.median_ms << ','
      << report.e2e.p95_ms << ',' << report.fps << ',' << report.jitter_ms << '\n';
  return out.str();
}

std::string report_table(const TimingReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(18) << "Stage" << std::right << std::setw(12) << "mean (ms)"
      << std::setw(12) << "median (ms)" << std::setw(12) << "p95 (ms)" << '\n';
  out << std::string(54, '-') << '\n';
  auto row = [&](std::string_view label, const LatencySummary& s) {
    out << std::left << std::setw(18) << label << std::right << std::setw(12) << s.mean_ms
        << std::setw(12) << s.median_ms << std::setw(12) << s.p95_ms << '\n';
  };
  for (std::size_t s = 0; s < kNumStages; ++s) row(stage_label(kStages[s]), report.stages[s]);
  out << std::string(54, '-') << '\n';
  row("Total", report.e2e);
  out << "frames: " << report.frames << "  throughput: " << report.fps
      << " FPS  jitter (p95 - median): " << report.jitter_ms << " ms\n";
  return out.str();
}

void StageRecorder::begin_frame(FrameIndex t) {
  current_ = StageTiming{};
  current_.t = t;
  in_frame_ = true;
  in_stage_ = false;
}

void StageRecorder::begin(Stage s) {
  stage_ = s;
  in_stage_ = true;
  started_ = Clock::now();
}

void StageRecorder::end(Stage s) {
  const auto now = Clock::now();
  if (!in_frame_ || !in_stage_ || s != stage_) return;
  current_.stage(s) += std::chrono::duration<double, std::milli>(now - started_).count();
  in_stage_ = false;
}

void StageRecorder::end_frame() {
  if (!in_frame_) return;
  records_.push_back(current_);
  in_frame_ = false;
}

}  // namespace alertgate
