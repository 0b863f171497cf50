#include "ptseq/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "ptseq/hmm.hpp"
#include "ptseq/pthmm.hpp"

namespace ptseq {
namespace {

std::uint64_t now_ns() {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

// Multiply-adds of the scaled forward recursion: N initial products, then
// N(2N+1) per remaining step (N products and N-1 additions into the
// accumulator plus the emission product, per target state).
std::uint64_t hmm_forward_ops(std::size_t n, std::size_t t) {
  return static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(t - 1) * n * (2 * n + 1);
}

template <typename F>
std::uint64_t best_of(int trials, F&& run) {
  run();  // warmup
  std::uint64_t best = UINT64_MAX;
  for (int i = 0; i < trials; ++i) {
    std::uint64_t start = now_ns();
    run();
    std::uint64_t elapsed = now_ns() - start;
    if (elapsed < best) best = elapsed;
  }
  return best;
}

std::string build_environment_note() {
  char buf[160];
#if defined(__clang__)
  std::snprintf(buf, sizeof buf, "clang %d.%d, single thread", __clang_major__,
                __clang_minor__);
#elif defined(__GNUC__)
  std::snprintf(buf, sizeof buf, "gcc %d.%d, single thread", __GNUC__,
                __GNUC_MINOR__);
#else
  std::snprintf(buf, sizeof buf, "unknown compiler, single thread");
#endif
  return buf;
}

}  // namespace

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs matching lists of >= 2 points");
  }
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw std::invalid_argument("slope fit needs positive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  return num / den;
}

BenchmarkReport benchmark_run(const std::vector<std::size_t>& state_counts,
                              std::size_t t_len, int trials,
                              std::uint64_t seed) {
  if (state_counts.size() < 4) {
    throw std::invalid_argument("benchmark needs at least four state counts");
  }
  if (t_len < 2) throw std::invalid_argument("benchmark needs t_len >= 2");
  if (trials < 1) throw std::invalid_argument("benchmark needs trials >= 1");
  for (std::size_t n : state_counts) {
    if (n < 2) throw std::invalid_argument("state counts must be >= 2");
  }

  const std::size_t num_symbols = 8;
  std::mt19937_64 rng(seed);
  SymbolSequence obs(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    obs[t] = static_cast<int>(rng() % num_symbols);
  }

  BenchmarkReport report;
  report.seed = seed;
  report.trials = trials;
  report.environment = build_environment_note();

  // The sink defeats dead-code elimination of the timed calls.
  volatile double sink = 0.0;
  for (std::size_t n : state_counts) {
    HmmModel hmm = random_hmm(n, num_symbols, seed + n);
    PthmmModel pt =
        random_pthmm(n, num_symbols, seed + n, Algebra::PaperLiteral, true);

    BenchRow row;
    row.n = n;
    row.t = t_len;
    row.hmm_ns = best_of(trials, [&] { sink = hmm_forward_log_likelihood(hmm, obs); });
    row.pthmm_ns = best_of(trials, [&] { sink = pt_forward_possibility(pt, obs); });
    row.hmm_ops = hmm_forward_ops(n, t_len);
    row.pthmm_ops = pt_forward_counted(pt, obs).ops;
    report.rows.push_back(row);
  }
  (void)sink;

  std::vector<double> ns_axis, hmm_wall, pt_wall, hmm_ops, pt_ops;
  for (const BenchRow& row : report.rows) {
    ns_axis.push_back(static_cast<double>(row.n));
    hmm_wall.push_back(static_cast<double>(row.hmm_ns));
    pt_wall.push_back(static_cast<double>(row.pthmm_ns));
    hmm_ops.push_back(static_cast<double>(row.hmm_ops));
    pt_ops.push_back(static_cast<double>(row.pthmm_ops));
  }
  report.hmm_slope = fit_loglog_slope(ns_axis, hmm_wall);
  report.pthmm_slope = fit_loglog_slope(ns_axis, pt_wall);
  report.hmm_ops_slope = fit_loglog_slope(ns_axis, hmm_ops);
  report.pthmm_ops_slope = fit_loglog_slope(ns_axis, pt_ops);
  return report;
}

void write_benchmark_report(const BenchmarkReport& report, std::ostream& out) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "{\n";
  out << "  \"environment\": \"" << report.environment << "\",\n";
  out << "  \"seed\": " << report.seed << ",\n";
  out << "  \"trials\": " << report.trials << ",\n";
  out << "  \"rows\": [\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BenchRow& r = report.rows[i];
    out << "    {\"n\": " << r.n << ", \"t\": " << r.t
        << ", \"hmm_ns\": " << r.hmm_ns << ", \"pthmm_ns\": " << r.pthmm_ns
        << ", \"hmm_ops\": " << r.hmm_ops << ", \"pthmm_ops\": " << r.pthmm_ops
        << "}" << (i + 1 < report.rows.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"hmm_slope\": " << fmt(report.hmm_slope) << ",\n";
  out << "  \"pthmm_slope\": " << fmt(report.pthmm_slope) << ",\n";
  out << "  \"hmm_ops_slope\": " << fmt(report.hmm_ops_slope) << ",\n";
  out << "  \"pthmm_ops_slope\": " << fmt(report.pthmm_ops_slope) << "\n";
  out << "}\n";
}

}  // namespace ptseq
