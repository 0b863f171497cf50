#pragma once

#include <cstddef>
#include <vector>

namespace ptseq {

// Composition algebra for possibilistic recursions. Disjunction is max under
// both modes. MinMax uses min as conjunction (the standard max-min semiring);
// PaperLiteral uses max as conjunction, which is what makes the O(NT)
// forward fast path possible.
enum class Algebra { MinMax, PaperLiteral };

enum class CombineOp { Conjunction, Disjunction };

// Finite possibility distribution over the domain {0, ..., domain_size-1}.
// Degrees outside [0, 1] are rejected at construction, never clamped.
class PossibilityDistribution {
 public:
  explicit PossibilityDistribution(std::vector<double> degrees);

  std::size_t domain_size() const { return degrees_.size(); }
  double degree(std::size_t u) const;
  const std::vector<double>& degrees() const { return degrees_; }

  // True when at least one degree equals 1.
  bool normalized() const;

 private:
  std::vector<double> degrees_;
};

// Possibility of a subset of the domain: max degree over the subset.
// The empty subset yields 0.
double possibility_of(const PossibilityDistribution& dist,
                      const std::vector<std::size_t>& subset);

// Necessity of a subset: min of (1 - degree) over the complement.
// The full-domain subset yields 1.
double necessity_of(const PossibilityDistribution& dist,
                    const std::vector<std::size_t>& subset);

// Checked two-degree composition. Inputs outside [0, 1] raise a domain error.
double combine(double a, double b, CombineOp op, Algebra algebra);

// Unchecked composition helpers for hot loops; callers guarantee [0, 1].
inline double disj(double a, double b) { return a > b ? a : b; }

inline double conj(double a, double b, Algebra algebra) {
  if (algebra == Algebra::MinMax) return a < b ? a : b;
  return a > b ? a : b;
}

}  // namespace ptseq
