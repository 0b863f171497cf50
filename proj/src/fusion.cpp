#include "ptseq/fusion.hpp"

#include <stdexcept>

namespace ptseq {

FusionResult fuse(const ModeDecision& d1, const ModeDecision& d2,
                  const FusionConfig& config) {
  if (!(config.theta1 >= 0.0 && config.theta1 <= 1.0 &&
        config.theta2 >= 0.0 && config.theta2 <= 1.0)) {
    throw std::invalid_argument("fusion thresholds must lie in [0,1]");
  }
  if (!(config.w1 > 0.0 && config.w2 > 0.0)) {
    throw std::invalid_argument("fusion weights must be positive");
  }
  if (!(d1.likelihood >= 0.0 && d1.likelihood <= 1.0 &&
        d2.likelihood >= 0.0 && d2.likelihood <= 1.0)) {
    throw std::invalid_argument("mode likelihoods must lie in [0,1]");
  }

  const bool above1 = d1.likelihood >= config.theta1;
  const bool above2 = d2.likelihood >= config.theta2;
  if (above1 && above2) {
    return {d2.likelihood <= d1.likelihood ? d1.label : d2.label, 1};
  }
  if (above1) return {d1.label, 2};
  if (above2) return {d2.label, 3};
  const double s1 = config.w1 * d1.likelihood;
  const double s2 = config.w2 * d2.likelihood;
  return {s2 <= s1 ? d1.label : d2.label, 4};
}

std::pair<double, double> derive_weights(double acc1, double acc2) {
  if (!(acc1 > 0.0) || !(acc2 > 0.0)) {
    throw std::invalid_argument("accuracies must be positive");
  }
  const double total = acc1 + acc2;
  return {acc1 / total, acc2 / total};
}

}  // namespace ptseq
