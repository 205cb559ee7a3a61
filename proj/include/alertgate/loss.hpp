// Reference math for class-imbalanced training: capped inverse-frequency
// class weights and the class-weighted focal loss (natural log).
#pragma once

#include <cstdint>
#include <vector>

#include "alertgate/core.hpp"

namespace alertgate::loss {

inline constexpr double kDefaultGamma = 1.5;
inline constexpr double kDefaultWeightCap = 10.0;

struct ClassWeights {
  std::vector<double> alpha;
  double cap = kDefaultWeightCap;
};

// alpha_c = min(cap, N / (C * n_c)) with N the total count and C the number of classes.
ClassWeights class_weights(const std::vector<std::int64_t>& counts,
                           double cap = kDefaultWeightCap);

// -alpha * (1 - p)^gamma * ln(p)
double focal_loss(double p_true, double alpha_true, double gamma = kDefaultGamma);

// d/dp of focal_loss.
double focal_loss_grad(double p_true, double alpha_true, double gamma = kDefaultGamma);

}  // namespace alertgate::loss
