#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ptseq/matrix.hpp"

namespace ptseq {

enum class Topology {
  Ergodic,    // fully connected
  LeftRight,  // state i reaches only i and i+1; start pinned to state 0
};

struct HmmModel {
  std::size_t num_states = 0;   // N
  std::size_t num_symbols = 0;  // M
  Matrix transition;            // N x N, row-stochastic
  Matrix emission;              // N x M, row-stochastic
  std::vector<double> initial;  // N, sums to 1
};

// Throws std::invalid_argument unless dimensions are consistent, entries lie
// in [0,1], and rows (and the initial vector) sum to 1 within 1e-9.
void hmm_validate(const HmmModel& model);

HmmModel uniform_hmm(std::size_t num_states, std::size_t num_symbols,
                     Topology topology = Topology::Ergodic);

// Rows drawn from a deterministic engine (same bits on every platform) and
// normalized; structural zeros of the topology are preserved.
HmmModel random_hmm(std::size_t num_states, std::size_t num_symbols,
                    std::uint64_t seed, Topology topology = Topology::Ergodic);

struct HmmEvaluation {
  double log_likelihood = 0.0;           // from the forward pass
  double log_likelihood_backward = 0.0;  // same quantity via the backward pass
  Matrix forward;              // T x N, per-step normalized alpha
  Matrix backward;             // T x N, beta scaled so sum_i fwd*bwd = 1 at all t
  std::vector<double> scale;   // per-step forward normalizers c_t
};

// Scaled forward-backward evaluation. Impossible sequences yield a
// log-likelihood of -infinity.
HmmEvaluation hmm_evaluate(const HmmModel& model, const SymbolSequence& obs);

// Forward pass only; the benchmark hot path.
double hmm_forward_log_likelihood(const HmmModel& model, const SymbolSequence& obs);

struct ViterbiResult {
  std::vector<int> path;          // length T
  double log_probability = 0.0;   // of the best path
};

// Most probable state path; among ties, the lexicographically smallest
// state sequence.
ViterbiResult hmm_viterbi(const HmmModel& model, const SymbolSequence& obs);

struct HmmTrainConfig {
  int max_iters = 100;
  double tol = 1e-4;  // stop when no parameter moves more than this
};

struct HmmTrainResult {
  HmmModel model;
  std::vector<double> log_likelihood_history;  // total across sequences, per iteration
  int iterations = 0;
};

// Multi-sequence Baum-Welch: expected counts are summed across sequences
// before renormalization. Re-estimated rows get a 1e-6 floor on entries the
// topology allows (structural zeros stay zero) and are renormalized.
HmmTrainResult hmm_train(const HmmModel& init,
                         const std::vector<SymbolSequence>& sequences,
                         const HmmTrainConfig& config = {});

}  // namespace ptseq
