#include "alertgate/frame_metrics.hpp"

#include <string>

namespace alertgate {

FrameMetrics frame_metrics(const std::vector<ClassId>& pred, const std::vector<ClassId>& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pred has " + std::to_string(pred.size()) +
                                                " labels, gt has " + std::to_string(gt.size()));
  }
  struct Counts {
    long tp = 0, fp = 0, fn = 0;
  };
  std::map<ClassId, Counts> counts;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (pred[i] == gt[i]) {
      ++counts[gt[i]].tp;
    } else {
      ++counts[pred[i]].fp;
      ++counts[gt[i]].fn;
    }
  }

  FrameMetrics out;
  if (counts.empty()) return out;
  double f1_sum = 0.0, recall_sum = 0.0;
  int gt_classes = 0;
  for (const auto& [c, n] : counts) {
    const double denom = 2.0 * n.tp + n.fp + n.fn;
    const double f1 = denom > 0 ? 2.0 * n.tp / denom : 0.0;
    out.per_class_f1[c] = f1;
    f1_sum += f1;
    if (n.tp + n.fn > 0) {
      recall_sum += static_cast<double>(n.tp) / static_cast<double>(n.tp + n.fn);
      ++gt_classes;
    }
  }
  out.macro_f1 = f1_sum / static_cast<double>(counts.size());
  out.balanced_accuracy = gt_classes > 0 ? recall_sum / gt_classes : 0.0;
  return out;
}

}  // namespace alertgate
