// Frame-level recognition metrics over hard labels.
#pragma once

#include <map>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate {

struct FrameMetrics {
  double macro_f1 = 0.0;
  double balanced_accuracy = 0.0;
  // Classes that occur in the ground truth or the predictions.
  std::map<ClassId, double> per_class_f1;
};

// Macro-F1 averages over classes present in gt or pred; balanced accuracy
// averages recall over classes present in gt. Throws kLengthMismatch.
FrameMetrics frame_metrics(const std::vector<ClassId>& pred, const std::vector<ClassId>& gt);

}  // namespace alertgate
