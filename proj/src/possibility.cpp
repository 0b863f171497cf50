#include "ptseq/possibility.hpp"

#include <stdexcept>

namespace ptseq {

PossibilityDistribution::PossibilityDistribution(std::vector<double> degrees)
    : degrees_(std::move(degrees)) {
  if (degrees_.empty()) {
    throw std::invalid_argument("possibility distribution needs a nonempty domain");
  }
  for (double d : degrees_) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw std::domain_error("possibility degree outside [0, 1]");
    }
  }
}

double PossibilityDistribution::degree(std::size_t u) const {
  if (u >= degrees_.size()) {
    throw std::domain_error("domain element out of range");
  }
  return degrees_[u];
}

bool PossibilityDistribution::normalized() const {
  for (double d : degrees_) {
    if (d == 1.0) return true;
  }
  return false;
}

double possibility_of(const PossibilityDistribution& dist,
                      const std::vector<std::size_t>& subset) {
  double best = 0.0;
  for (std::size_t u : subset) {
    best = disj(best, dist.degree(u));
  }
  return best;
}

double necessity_of(const PossibilityDistribution& dist,
                    const std::vector<std::size_t>& subset) {
  std::vector<bool> in_subset(dist.domain_size(), false);
  for (std::size_t u : subset) {
    if (u >= dist.domain_size()) {
      throw std::domain_error("domain element out of range");
    }
    in_subset[u] = true;
  }
  double worst = 1.0;
  for (std::size_t u = 0; u < dist.domain_size(); ++u) {
    if (!in_subset[u]) {
      const double v = 1.0 - dist.degree(u);
      worst = worst < v ? worst : v;
    }
  }
  return worst;
}

double combine(double a, double b, CombineOp op, Algebra algebra) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::domain_error("combine expects degrees in [0, 1]");
  }
  if (op == CombineOp::Disjunction) return disj(a, b);
  return conj(a, b, algebra);
}

}  // namespace ptseq
