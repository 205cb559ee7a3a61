#include "alertgate/events.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "alertgate/io.hpp"

namespace alertgate {

std::vector<AlertEvent> gt_events_from_labels(const std::vector<LabeledFrame>& labels) {
  std::vector<AlertEvent> events;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    if (i > 0 && l.t != labels[i - 1].t + 1) {
      throw Error(ErrorCode::kNonContiguousLabels,
                  "label t=" + std::to_string(l.t) + " does not follow t=" +
                      std::to_string(labels[i - 1].t));
    }
    if (l.label == kNormalClass) continue;
    if (i > 0 && labels[i - 1].label == l.label) {
      events.back().t_end = l.t;
    } else {
      events.push_back({l.label, l.t, l.t});
    }
  }
  return events;
}

std::int64_t intersection_frames(const AlertEvent& a, const AlertEvent& b) {
  const auto lo = std::max(a.t_start, b.t_start);
  const auto hi = std::min(a.t_end, b.t_end);
  return hi >= lo ? hi - lo + 1 : 0;
}

std::int64_t union_frames(const AlertEvent& a, const AlertEvent& b) {
  return a.length() + b.length() - intersection_frames(a, b);
}

double tiou(const AlertEvent& a, const AlertEvent& b) {
  return static_cast<double>(intersection_frames(a, b)) /
         static_cast<double>(union_frames(a, b));
}

MatchResult greedy_match(const std::vector<AlertEvent>& pred, const std::vector<AlertEvent>& gt,
                         double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "eta must be in (0,1]");

  struct Candidate {
    std::size_t p, g;
    std::int64_t inter, uni;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (pred[p].class_id != gt[g].class_id) continue;
      const auto inter = intersection_frames(pred[p], gt[g]);
      if (inter == 0) continue;
      const auto uni = union_frames(pred[p], gt[g]);
      if (static_cast<double>(inter) / static_cast<double>(uni) >= eta) {
        candidates.push_back({p, g, inter, uni});
      }
    }
  }
  // Exact rational ordering: a.inter/a.uni > b.inter/b.uni.
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const auto lhs = a.inter * b.uni;
    const auto rhs = b.inter * a.uni;
    if (lhs != rhs) return lhs > rhs;
    if (gt[a.g].t_start != gt[b.g].t_start) return gt[a.g].t_start < gt[b.g].t_start;
    if (pred[a.p].t_start != pred[b.p].t_start) return pred[a.p].t_start < pred[b.p].t_start;
    if (a.g != b.g) return a.g < b.g;
    return a.p < b.p;
  });

  MatchResult result;
  std::vector<bool> pred_used(pred.size(), false), gt_used(gt.size(), false);
  for (const auto& c : candidates) {
    if (pred_used[c.p] || gt_used[c.g]) continue;
    pred_used[c.p] = gt_used[c.g] = true;
    result.matches.push_back(
        {c.p, c.g, static_cast<double>(c.inter) / static_cast<double>(c.uni)});
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (!pred_used[p]) result.unmatched_pred.push_back(p);
  }
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gt.push_back(g);
  }
  return result;
}

double false_alerts_per_min(const MatchResult& result, const std::vector<AlertEvent>& pred,
                            std::int64_t duration_frames, const FrameRate& rate) {
  if (duration_frames <= 0) throw Error(ErrorCode::kZeroDuration, "evaluated duration is zero");
  const auto unmatched = std::count_if(
      result.unmatched_pred.begin(), result.unmatched_pred.end(),
      [&](std::size_t i) { return pred.at(i).class_id != kNormalClass; });
  const double minutes = static_cast<double>(duration_frames) / rate.fps() / 60.0;
  return static_cast<double>(unmatched) / minutes;
}

TimeToDetect time_to_detect(const MatchResult& result, const std::vector<AlertEvent>& pred,
                            const std::vector<AlertEvent>& gt) {
  TimeToDetect out;
  for (const auto& m : result.matches) {
    out.per_match.push_back(static_cast<double>(pred.at(m.pred).t_start - gt.at(m.gt).t_start));
  }
  if (!out.per_match.empty()) {
    out.mean = std::accumulate(out.per_match.begin(), out.per_match.end(), 0.0) /
               static_cast<double>(out.per_match.size());
  }
  return out;
}

double fragmentation(const std::vector<AlertEvent>& pred, const std::vector<AlertEvent>& gt) {
  if (gt.empty()) throw Error(ErrorCode::kNoGtEvents, "fragmentation needs gt events");
  std::size_t total = 0;
  for (const auto& g : gt) {
    for (const auto& p : pred) {
      if (p.class_id == g.class_id && intersection_frames(p, g) > 0) ++total;
    }
  }
  return static_cast<double>(total) / static_cast<double>(gt.size());
}

EventMetrics evaluate_events(const std::vector<AlertEvent>& pred,
                             const std::vector<AlertEvent>& gt, std::int64_t duration_frames,
                             const FrameRate& rate, double eta) {
  const MatchResult result = greedy_match(pred, gt, eta);
  EventMetrics m;
  m.false_alerts_per_min = false_alerts_per_min(result, pred, duration_frames, rate);
  const auto ttd = time_to_detect(result, pred, gt);
  if (ttd.mean) {
    m.mean_ttd_frames = ttd.mean;
    m.mean_ttd_seconds = *ttd.mean / rate.fps();
  }
  if (!gt.empty()) m.fragmentation = fragmentation(pred, gt);
  m.matched = result.matches.size();
  m.unmatched_pred = result.unmatched_pred.size();
  m.unmatched_gt = result.unmatched_gt.size();
  return m;
}

std::string metrics_csv_header() {
  return "variant,false_alerts_per_min,mean_ttd_frames,mean_ttd_seconds,fragmentation,"
         "matched,unmatched_pred,unmatched_gt";
}

std::string metrics_csv_row(const std::string& variant, const EventMetrics& m) {
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    std::ostringstream s;
    s.precision(10);
    s << *v;
    return s.str();
  };
  std::ostringstream row;
  row.precision(10);
  row << io::csv_field(variant) << ',' << m.false_alerts_per_min << ','
      << opt(m.mean_ttd_frames) << ',' << opt(m.mean_ttd_seconds) << ','
      << opt(m.fragmentation) << ',' << m.matched << ',' << m.unmatched_pred << ','
      << m.unmatched_gt;
  return row.str();
}

}  // namespace alertgate
