#include "alertgate/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "alertgate/core.hpp"

namespace alertgate::loss {

namespace {

void check_args(double p_true, double alpha_true, double gamma) {
  if (p_true == 0.0) throw Error(ErrorCode::kDegenerateProbability, "p_true must be > 0");
  if (!(p_true > 0.0 && p_true <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "p_true must be in (0,1]");
  }
  if (!(alpha_true > 0.0)) throw Error(ErrorCode::kInvalidConfig, "alpha must be > 0");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "gamma must be >= 0");
}

}  // namespace

ClassWeights class_weights(const std::vector<std::int64_t>& counts, double cap) {
  if (counts.empty()) throw Error(ErrorCode::kZeroCount, "no class counts");
  if (!(cap > 0.0)) throw Error(ErrorCode::kInvalidConfig, "cap must be > 0");
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < 1) {
      throw Error(ErrorCode::kZeroCount, "class " + std::to_string(c + 1) + " has no samples");
    }
  }
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(),
                                                           std::int64_t{0}));
  const double num_classes = static_cast<double>(counts.size());
  ClassWeights w;
  w.cap = cap;
  w.alpha.reserve(counts.size());
  for (auto n : counts) {
    w.alpha.push_back(std::min(cap, total / (num_classes * static_cast<double>(n))));
  }
  return w;
}

double focal_loss(double p_true, double alpha_true, double gamma) {
  check_args(p_true, alpha_true, gamma);
  return -alpha_true * std::pow(1.0 - p_true, gamma) * std::log(p_true);
}

double focal_loss_grad(double p_true, double alpha_true, double gamma) {
  check_args(p_true, alpha_true, gamma);
  const double q = 1.0 - p_true;
  // d/dp [-(1-p)^g ln p] = g (1-p)^(g-1) ln p - (1-p)^g / p
  const double focus = gamma == 0.0 || q == 0.0 ? 0.0 : gamma * std::pow(q, gamma - 1.0) * std::log(p_true);
  return alpha_true * (focus - std::pow(q, gamma) / p_true);
}

}  // namespace alertgate::loss
