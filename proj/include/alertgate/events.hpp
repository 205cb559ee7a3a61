// Event-level evaluation: reference events from frame labels, temporal IoU,
// greedy one-to-one matching and the operational alert metrics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

inline constexpr double kDefaultEta = 0.3;

struct EventMatch {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double tiou = 0.0;

  bool operator==(const EventMatch&) const = default;
};

struct MatchResult {
  std::vector<EventMatch> matches;
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;

  bool operator==(const MatchResult&) const = default;
};

struct TimeToDetect {
  std::vector<double> per_match;  // frames, in match order
  std::optional<double> mean;     // empty when there are no matches
};

struct EventMetrics {
  double false_alerts_per_min = 0.0;
  std::optional<double> mean_ttd_frames;
  std::optional<double> mean_ttd_seconds;
  std::optional<double> fragmentation;  // empty when there are no gt events
  std::size_t matched = 0;
  std::size_t unmatched_pred = 0;
  std::size_t unmatched_gt = 0;
};

// Each maximal run of one non-Normal label becomes an event. Labels must be
// ordered with consecutive frame indices (kNonContiguousLabels otherwise).
std::vector<AlertEvent> gt_events_from_labels(const std::vector<LabeledFrame>& labels);

// Closed-interval overlap and union sizes in frames.
std::int64_t intersection_frames(const AlertEvent& a, const AlertEvent& b);
std::int64_t union_frames(const AlertEvent& a, const AlertEvent& b);
double tiou(const AlertEvent& a, const AlertEvent& b);

// Same-class pairs with tIoU >= eta, taken by descending tIoU; ties go to the
// earlier gt start, then the earlier pred start.
MatchResult greedy_match(const std::vector<AlertEvent>& pred, const std::vector<AlertEvent>& gt,
                         double eta = kDefaultEta);

double false_alerts_per_min(const MatchResult& result, const std::vector<AlertEvent>& pred,
                            std::int64_t duration_frames, const FrameRate& rate);

TimeToDetect time_to_detect(const MatchResult& result, const std::vector<AlertEvent>& pred,
                            const std::vector<AlertEvent>& gt);

// Mean count of same-class predicted events overlapping each gt event.
// Throws kNoGtEvents for an empty gt list.
double fragmentation(const std::vector<AlertEvent>& pred, const std::vector<AlertEvent>& gt);

EventMetrics evaluate_events(const std::vector<AlertEvent>& pred,
                             const std::vector<AlertEvent>& gt, std::int64_t duration_frames,
                             const FrameRate& rate, double eta = kDefaultEta);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& variant, const EventMetrics& m);

}  // namespace alertgate
