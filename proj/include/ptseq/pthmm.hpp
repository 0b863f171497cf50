#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ptseq/matrix.hpp"
#include "ptseq/possibility.hpp"

namespace ptseq {

// Possibilistic sequence model: transition, emission, and initial degrees in
// [0,1] composed under the algebra's conjunction, aggregated by max.
struct PthmmModel {
  std::size_t num_states = 0;   // N
  std::size_t num_symbols = 0;  // M
  Matrix transition_poss;       // N x N
  Matrix emission_poss;         // N x M
  std::vector<double> initial_poss;  // N
  Algebra algebra = Algebra::MinMax;
  // When set, every transition row, every emission row, and the initial
  // vector contain at least one exact 1.
  bool max_normalized = false;
};

// Throws std::invalid_argument on inconsistent dimensions, entries outside
// [0,1], or a max_normalized flag the rows do not back up.
void pt_validate(const PthmmModel& model);

// Divides every row (and the initial vector) by its max, skipping all-zero
// rows; sets the flag when every row ends up with a 1.
void pt_max_normalize(PthmmModel& model);

// Deterministic random degrees in (0,1); max-normalized when requested.
PthmmModel random_pthmm(std::size_t num_states, std::size_t num_symbols,
                        std::uint64_t seed, Algebra algebra = Algebra::MinMax,
                        bool normalize = true);

struct PtForwardResult {
  Matrix phi;               // T x N
  double possibility = 0.0;  // max_i phi(T-1, i)
};

// Forward recursion under the model's algebra. MinMax composes
// min(prefix, transition, emission) and maximizes over predecessors (N^2 per
// step); PaperLiteral replaces every composition by max, which collapses each
// step to the running max of phi, per-column transition maxima (precomputed
// once), and the emission column — O(N) per step. Both equal the brute-force
// possibility over all state paths under their algebra.
PtForwardResult pt_forward(const PthmmModel& model, const SymbolSequence& obs);

// Possibility only, no phi matrix; the benchmark hot path.
double pt_forward_possibility(const PthmmModel& model, const SymbolSequence& obs);

struct PtCountedResult {
  PtForwardResult result;
  std::uint64_t ops = 0;  // scalar comparisons/compositions executed
};

// pt_forward plus an honest count of elementary scalar operations, including
// the per-call transition-maxima precomputation in PaperLiteral mode.
PtCountedResult pt_forward_counted(const PthmmModel& model,
                                   const SymbolSequence& obs);

// Suffix analogue of pt_forward: gamma(T-1, i) = 1, earlier rows compose the
// remaining transitions/emissions under the algebra. Combining
// conj(phi(t,i), gamma(t,i)) over i reproduces the sequence possibility at
// any t (for MinMax on any model; for PaperLiteral the identity requires a
// max-normalized model, since conj(x, 1) = 1 absorbs everything).
Matrix pt_backward(const PthmmModel& model, const SymbolSequence& obs);

struct PtViterbiResult {
  std::vector<int> path;     // length T
  double possibility = 0.0;  // conjunction along the best path
};

// Path maximizing the conjunction of initial, transition, and emission
// degrees; among ties, the lexicographically smallest state sequence. The
// walk tracks the prefix conjunction explicitly: min/max composition is not
// strictly monotone, so suffix values alone cannot identify every optimal
// continuation.
PtViterbiResult pt_viterbi(const PthmmModel& model, const SymbolSequence& obs);

struct PtTrainConfig {
  int max_iters = 100;
  double tol = 1e-4;  // stop when no parameter moves more than this
};

struct PtTrainResult {
  PthmmModel model;
  int iterations = 0;
};

// Possibilistic re-estimation: per-sequence state and transition relevance
// degrees xi and eps are composed from forward/backward values and divided
// by the sequence possibility, aggregated across time and sequences by max,
// and the ratio of aggregates updates each row. Zero denominators leave a
// row unchanged (no evidence); positive ones are floored at 1e-12. Every
// updated row is max-normalized. Zero-possibility sequences are skipped.
PtTrainResult pt_learn(const PthmmModel& init,
                       const std::vector<SymbolSequence>& sequences,
                       const PtTrainConfig& config = {});

struct PtScore {
  std::size_t label = 0;     // index into the model list
  double possibility = 0.0;
};

// Scores every model on the sequence via pt_forward and ranks descending;
// ties go to the lower label.
std::vector<PtScore> pt_classify(const std::vector<PthmmModel>& models,
                                 const SymbolSequence& obs);

}  // namespace ptseq
