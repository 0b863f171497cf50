#pragma once

#include <string>
#include <utility>

namespace ptseq {

struct ModeDecision {
  std::string label;
  double likelihood = 0.0;  // in [0,1]
};

struct FusionConfig {
  double theta1 = 0.8;   // acceptance threshold for mode 1
  double theta2 = 0.85;  // acceptance threshold for mode 2
  double w1 = 0.5;       // positive weights for the both-below branch
  double w2 = 0.5;
};

struct FusionResult {
  std::string label;
  int branch = 0;  // 1..4, which rule row fired
};

// Four-branch decision rule: both likelihoods at/above their thresholds →
// the larger wins (ties → mode 1); exactly one above → it wins outright;
// both below → compare w1*a1 against w2*a2 under the same tie rule.
FusionResult fuse(const ModeDecision& d1, const ModeDecision& d2,
                  const FusionConfig& config = {});

// Accuracy-proportional weights (w1, w2) with w1 + w2 = 1.
std::pair<double, double> derive_weights(double acc1, double acc2);

}  // namespace ptseq
