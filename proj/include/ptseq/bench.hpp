#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptseq {

struct BenchRow {
  std::size_t n = 0;            // state count
  std::size_t t = 0;            // sequence length
  std::uint64_t hmm_ns = 0;     // best-of-trials wall time, forward pass
  std::uint64_t pthmm_ns = 0;
  std::uint64_t hmm_ops = 0;    // elementary operations in the recursion
  std::uint64_t pthmm_ops = 0;
};

struct BenchmarkReport {
  std::vector<BenchRow> rows;
  double hmm_slope = 0.0;         // wall time vs state count, log-log
  double pthmm_slope = 0.0;
  double hmm_ops_slope = 0.0;     // operation count vs state count, log-log
  double pthmm_ops_slope = 0.0;
  std::string environment;
  std::uint64_t seed = 0;
  int trials = 0;
};

// Least-squares slope of log(y) against log(x); needs at least two points,
// all positive.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Times the probabilistic forward pass against the possibilistic one (max/max
// composition, which admits the O(N) per-step recursion) on random
// max-normalized models of each requested state count, all on one shared
// random symbol sequence of length t_len. Requires at least four state
// counts. Wall times are the minimum over `trials` runs after one warmup.
BenchmarkReport benchmark_run(const std::vector<std::size_t>& state_counts,
                              std::size_t t_len, int trials, std::uint64_t seed);

// JSON with per-size rows keyed n/t/hmm_ns/pthmm_ns/hmm_ops/pthmm_ops and
// top-level hmm_slope/pthmm_slope (wall time) plus the operation-count
// slopes, environment note, seed, and trial count.
void write_benchmark_report(const BenchmarkReport& report, std::ostream& out);

}  // namespace ptseq
