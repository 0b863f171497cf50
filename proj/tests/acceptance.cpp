// Release gate: one self-contained check per shipped guarantee, one line of
// output each, nonzero exit if anything fails. Reference values come from
// the same brute-force oracles the unit tests use.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptseq/bench.hpp"
#include "ptseq/dsp.hpp"
#include "ptseq/features.hpp"
#include "ptseq/fusion.hpp"
#include "ptseq/hmm.hpp"
#include "ptseq/matrix.hpp"
#include "ptseq/pthmm.hpp"
#include "ptseq/vq.hpp"

using namespace ptseq;

namespace {

int g_failures = 0;

void report(int index, bool ok, const std::string& text) {
  std::printf("%2d. %s  %s\n", index, ok ? "PASS" : "FAIL", text.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
double best_seconds(int trials, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < trials; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

std::string fmt(const char* format, ...) {
  char buffer[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

SymbolSequence random_symbols(oracles::UnitRng& rng, std::size_t length,
                              int num_symbols) {
  SymbolSequence obs(length);
  for (int& s : obs) s = rng.uniform_int(0, num_symbols - 1);
  return obs;
}

// --- 1. possibilistic forward vs exhaustive path search ---------------------

void check_pt_forward_brute() {
  const auto t0 = std::chrono::steady_clock::now();
  oracles::UnitRng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::size_t(rng.uniform_int(1, 3));
    const std::size_t m = std::size_t(rng.uniform_int(1, 3));
    const std::size_t t = std::size_t(rng.uniform_int(1, 5));
    const SymbolSequence obs = random_symbols(rng, t, int(m));
    for (Algebra algebra : {Algebra::MinMax, Algebra::PaperLiteral}) {
      const PthmmModel model = random_pthmm(n, m, 1000 + std::uint64_t(trial),
                                            algebra, trial % 2 == 0);
      const double fast = pt_forward(model, obs).possibility;
      const double brute = oracles::brute_pt_possibility(model, obs);
      worst = std::max(worst, std::abs(fast - brute));
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, worst <= 1e-12 && elapsed < 5.0,
         fmt("possibilistic forward matches exhaustive path search on 100 "
             "model/sequence pairs, both algebras (max |diff| %.2e, %.2fs)",
             worst, elapsed));
}

// --- 2. best-path possibility equals sequence possibility -------------------

void check_pt_viterbi_equals_forward() {
  oracles::UnitRng rng(202);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::size_t(rng.uniform_int(1, 5));
    const std::size_t m = std::size_t(rng.uniform_int(1, 4));
    const std::size_t t = std::size_t(rng.uniform_int(1, 8));
    const PthmmModel model = random_pthmm(n, m, 2000 + std::uint64_t(trial),
                                          Algebra::MinMax, trial % 2 == 0);
    const SymbolSequence obs = random_symbols(rng, t, int(m));
    if (pt_viterbi(model, obs).possibility ==
        pt_forward(model, obs).possibility) {
      ++agree;
    }
  }
  report(2, agree == 100,
         fmt("best-path possibility equals the forward possibility bit for "
             "bit under min/max (%d/100 cases)",
             agree));
}

// --- 3. operation-count and wall-time scaling in the state count ------------

void check_scaling_slopes() {
  const auto t0 = std::chrono::steady_clock::now();
  const BenchmarkReport r = benchmark_run({8, 16, 32, 64, 128}, 2000, 3, 42);
  const double elapsed = seconds_since(t0);
  const bool ops_ok = std::abs(r.hmm_ops_slope - 2.0) <= 0.05 &&
                      std::abs(r.pthmm_ops_slope - 1.0) <= 0.05;
  const bool wall_ok = r.hmm_slope >= 1.7 && r.hmm_slope <= 2.3 &&
                       r.pthmm_slope >= 0.7 && r.pthmm_slope <= 1.3;
  report(3, ops_ok && wall_ok && elapsed < 60.0,
         fmt("forward-pass cost is quadratic vs linear in the state count: "
             "op-count slopes %.3f/%.3f, wall slopes %.2f/%.2f (%.1fs)",
             r.hmm_ops_slope, r.pthmm_ops_slope, r.hmm_slope, r.pthmm_slope,
             elapsed));
}

// --- 4. four-state forward pass: possibilistic beats probabilistic ----------

void check_small_model_wall_time() {
  oracles::UnitRng rng(404);
  const std::size_t t_len = 20000;
  const HmmModel prob = random_hmm(4, 8, 7);
  const PthmmModel poss = random_pthmm(4, 8, 7, Algebra::PaperLiteral, true);
  const SymbolSequence obs = random_symbols(rng, t_len, 8);

  volatile double sink = 0.0;
  (void)hmm_forward_log_likelihood(prob, obs);  // warmup
  (void)pt_forward_possibility(poss, obs);
  const double prob_s = best_seconds(
      9, [&] { sink = hmm_forward_log_likelihood(prob, obs); });
  const double poss_s =
      best_seconds(9, [&] { sink = pt_forward_possibility(poss, obs); });
  (void)sink;
  report(4, poss_s < prob_s,
         fmt("four-state forward pass, equal length %zu: possibilistic "
             "%.3fms < probabilistic %.3fms",
             t_len, poss_s * 1e3, prob_s * 1e3));
}

// --- 5. ten-class recognition accuracy ---------------------------------------

void check_synthetic_recognition() {
  const auto t0 = std::chrono::steady_clock::now();
  const int num_classes = 10, train_per_class = 60, test_per_class = 40;
  const std::size_t t_len = 15, n = 4, m = 10;

  // Class c uses only symbols {c, (c+1) mod 10}, drawn i.i.d.
  auto sample = [&](int c, oracles::UnitRng& rng) {
    SymbolSequence obs(t_len);
    for (int& s : obs) s = rng() < 0.5 ? c : (c + 1) % num_classes;
    return obs;
  };

  std::vector<HmmModel> prob_models;
  std::vector<PthmmModel> poss_models;
  std::vector<std::vector<SymbolSequence>> tests(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    oracles::UnitRng rng(5000 + std::uint64_t(c));
    std::vector<SymbolSequence> train(train_per_class);
    for (auto& seq : train) seq = sample(c, rng);
    tests[c].resize(test_per_class);
    for (auto& seq : tests[c]) seq = sample(c, rng);

    HmmTrainConfig prob_config;
    prob_config.max_iters = 15;
    prob_models.push_back(
        hmm_train(random_hmm(n, m, 600 + std::uint64_t(c)), train, prob_config)
            .model);
    PtTrainConfig poss_config;
    poss_config.max_iters = 10;
    poss_models.push_back(
        pt_learn(random_pthmm(n, m, 700 + std::uint64_t(c), Algebra::MinMax),
                 train, poss_config)
            .model);
  }

  int prob_hits = 0, poss_hits = 0, total = 0;
  for (int c = 0; c < num_classes; ++c) {
    for (const SymbolSequence& obs : tests[c]) {
      int prob_best = 0, poss_best = 0;
      double prob_top = -1e300, poss_top = -1.0;
      for (int k = 0; k < num_classes; ++k) {
        const double ll = hmm_forward_log_likelihood(prob_models[k], obs);
        if (ll > prob_top) {
          prob_top = ll;
          prob_best = k;
        }
        const double po = pt_forward_possibility(poss_models[k], obs);
        if (po > poss_top) {
          poss_top = po;
          poss_best = k;
        }
      }
      prob_hits += prob_best == c;
      poss_hits += poss_best == c;
      ++total;
    }
  }
  const double prob_acc = double(prob_hits) / total;
  const double poss_acc = double(poss_hits) / total;
  const double elapsed = seconds_since(t0);
  report(5,
         prob_acc >= 0.80 && poss_acc >= 0.80 &&
             poss_acc >= prob_acc - 0.10 && elapsed < 30.0,
         fmt("ten-class recognition, 60 train / 40 test per class: "
             "possibilistic %.1f%% vs probabilistic %.1f%% (%.1fs)",
             poss_acc * 100.0, prob_acc * 100.0, elapsed));
}

// --- 6. probabilistic forward vs path sum; training monotonicity ------------

void check_hmm_forward_and_training() {
  oracles::UnitRng rng(606);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::size_t(rng.uniform_int(1, 3));
    const std::size_t m = std::size_t(rng.uniform_int(1, 3));
    const std::size_t t = std::size_t(rng.uniform_int(1, 5));
    const HmmModel model = random_hmm(n, m, 3000 + std::uint64_t(trial));
    const SymbolSequence obs = random_symbols(rng, t, int(m));
    const double brute = oracles::brute_hmm_likelihood(model, obs);
    const double fast = std::exp(hmm_forward_log_likelihood(model, obs));
    worst_rel = std::max(worst_rel,
                         std::abs(fast - brute) / std::max(brute, 1e-300));
  }

  bool monotone = true;
  for (int trial = 0; trial < 10; ++trial) {
    const HmmModel source = random_hmm(3, 4, 7000 + std::uint64_t(trial));
    oracles::UnitRng sampler(7100 + std::uint64_t(trial));
    std::vector<SymbolSequence> data(8);
    for (auto& seq : data) {
      // Draw a length-20 sequence from the source model.
      seq.resize(20);
      std::size_t state = 0;
      double u = sampler();
      double acc = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        acc += source.initial[i];
        if (u <= acc) {
          state = i;
          break;
        }
      }
      for (std::size_t step = 0; step < 20; ++step) {
        u = sampler();
        acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
          acc += source.emission(state, k);
          if (u <= acc || k == 3) {
            seq[step] = int(k);
            break;
          }
        }
        u = sampler();
        acc = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
          acc += source.transition(state, j);
          if (u <= acc || j == 2) {
            state = j;
            break;
          }
        }
      }
    }
    HmmTrainConfig config;
    config.max_iters = 20;
    config.tol = 0.0;  // run every iteration
    const HmmTrainResult fit =
        hmm_train(random_hmm(3, 4, 7200 + std::uint64_t(trial)), data, config);
    for (std::size_t i = 1; i < fit.log_likelihood_history.size(); ++i) {
      if (fit.log_likelihood_history[i] <
          fit.log_likelihood_history[i - 1] - 1e-9) {
        monotone = false;
      }
    }
  }
  report(6, worst_rel <= 1e-10 && monotone,
         fmt("probabilistic forward matches the path sum (max rel err %.2e) "
             "and 20 training iterations never lower the log-likelihood",
             worst_rel));
}

// --- 7. wavelet analysis: perfect reconstruction, energy preservation -------

void check_dwt_reconstruction() {
  oracles::UnitRng rng(707);
  double worst_abs = 0.0, worst_energy = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Signal signal;
    signal.sample_rate_hz = 8000.0;
    signal.samples.resize(8 * std::size_t(rng.uniform_int(8, 128)));
    for (double& s : signal.samples) s = 2.0 * rng() - 1.0;
    const WaveletFilter filter =
        trial % 2 == 0 ? WaveletFilter::d4() : WaveletFilter::d6();
    const int levels = 1 + trial % 3;

    const DwtCoefficients coeffs = dwt1d(signal, filter, levels);
    const Signal back = idwt1d(coeffs, filter);
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
      worst_abs =
          std::max(worst_abs, std::abs(back.samples[i] - signal.samples[i]));
    }

    double in_energy = 0.0, out_energy = 0.0;
    for (double s : signal.samples) in_energy += s * s;
    for (double c : coeffs.approx) out_energy += c * c;
    for (const auto& band : coeffs.details) {
      for (double c : band) out_energy += c * c;
    }
    worst_energy = std::max(
        worst_energy, std::abs(out_energy - in_energy) / in_energy);
  }
  report(7, worst_abs < 1e-9 && worst_energy < 1e-9,
         fmt("analysis/synthesis round trip on 100 signals, both filters, "
             "levels 1-3: max abs err %.2e, max energy drift %.2e",
             worst_abs, worst_energy));
}

// --- 8. frequency-scale and window constants ---------------------------------

void check_dsp_constants() {
  const double mel = mel_scale(700.0);
  const double erb = erb_bandwidth(1.0);
  const std::vector<double> w = hamming_window(64);
  // 0.54 - 0.46 is the exact closed-form value at k = 0; the decimal 0.08
  // differs from it by one ulp.
  const bool window_ok =
      w[0] == 0.54 - 0.46 && std::abs(w[0] - 0.08) < 1e-15;
  report(8,
         std::abs(mel - 781.17) <= 0.01 && std::abs(erb - 128.14) <= 0.01 &&
             window_ok,
         fmt("mel(700 Hz) = %.2f, ERB(1 kHz) = %.2f Hz, Hamming w[0] = 0.08 "
             "(exact closed form)",
             mel, erb));
}

// --- 9. contour descriptor rotation invariance -------------------------------

void check_descriptor_rotation_invariance() {
  oracles::UnitRng rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t seed = 9000 + std::uint64_t(trial);
    const double alpha = 2.0 * 3.141592653589793 * rng();
    // Same radii sampled twice: the second contour is the first rotated.
    oracles::UnitRng base_rng(seed), rot_rng(seed);
    std::vector<std::pair<double, double>> base(48), rotated(48);
    std::vector<double> radii(48);
    for (double& r : radii) r = 0.6 + 0.4 * base_rng();
    for (std::size_t i = 0; i < 48; ++i) {
      const double theta = 2.0 * 3.141592653589793 * double(i) / 48.0;
      base[i] = {radii[i] * std::cos(theta), radii[i] * std::sin(theta)};
      rotated[i] = {radii[i] * std::cos(theta + alpha),
                    radii[i] * std::sin(theta + alpha)};
    }
    (void)rot_rng;
    const std::vector<double> d0 =
        wavelet_descriptor(make_contour(base), 2, 5);
    const std::vector<double> d1 =
        wavelet_descriptor(make_contour(rotated), 2, 5);
    double scale = 1e-30;
    for (double v : d0) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < d0.size(); ++i) {
      worst = std::max(worst, std::abs(d0[i] - d1[i]) / scale);
    }
  }
  report(9, worst < 1e-6,
         fmt("contour descriptor is rotation invariant on 50 random shapes "
             "(max rel deviation %.2e)",
             worst));
}

// --- 10. codebook training: monotone distortion, exact recovery -------------

void check_codebook_training() {
  oracles::UnitRng rng(1010);
  bool monotone = true;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix points(50, 3);
    for (double& v : points.data) v = rng();
    const Codebook book = lbg_train(points, std::size_t(1 + trial % 6));
    for (std::size_t i = 1; i < book.distortion_history.size(); ++i) {
      if (book.distortion_history[i] >
          book.distortion_history[i - 1] + 1e-12) {
        monotone = false;
      }
    }
  }

  // Two tight, well-separated blobs: the 2-codebook lands on the blob means.
  Matrix blobs(60, 3);
  std::vector<double> mean_a(3, 0.0), mean_b(3, 0.0);
  for (std::size_t i = 0; i < 60; ++i) {
    const bool first = i % 2 == 0;
    for (std::size_t d = 0; d < 3; ++d) {
      const double v = (first ? -1.0 : 1.0) + 0.1 * (rng() - 0.5);
      blobs(i, d) = v;
      (first ? mean_a : mean_b)[d] += v / 30.0;
    }
  }
  const Codebook two = lbg_train(blobs, 2);
  double recovery = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    // Match the centroid to the nearer blob mean.
    const std::vector<double>& target =
        two.centroids(c, 0) < 0.0 ? mean_a : mean_b;
    for (std::size_t d = 0; d < 3; ++d) {
      recovery =
          std::max(recovery, std::abs(two.centroids(c, d) - target[d]));
    }
  }
  const bool split = (two.centroids(0, 0) < 0.0) != (two.centroids(1, 0) < 0.0);
  report(10, monotone && split && recovery <= 1e-9,
         fmt("codebook training never raises distortion and recovers two "
             "separated cluster means (max centroid err %.2e)",
             recovery));
}

// --- 11. decision fusion: rule rows, exhaustive grid, accuracy gain ---------

void check_decision_fusion() {
  const FusionConfig config;
  bool rows_ok = true;
  auto expect = [&](double a1, double a2, const std::string& label,
                    int branch) {
    const FusionResult r = fuse({"m1", a1}, {"m2", a2}, config);
    if (r.label != label || r.branch != branch) rows_ok = false;
  };
  expect(0.90, 0.95, "m2", 1);
  expect(0.95, 0.95, "m1", 1);  // ties stay with the first mode
  expect(0.90, 0.70, "m1", 2);
  expect(0.50, 0.90, "m2", 3);
  expect(0.50, 0.60, "m2", 4);
  expect(0.60, 0.60, "m1", 4);  // equal weights tie back to the first mode

  int grid_mismatches = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a1 = i / 100.0, a2 = j / 100.0;
      const bool high1 = a1 >= config.theta1, high2 = a2 >= config.theta2;
      int branch;
      std::string label;
      if (high1 && high2) {
        branch = 1;
        label = a2 > a1 ? "m2" : "m1";
      } else if (high1) {
        branch = 2;
        label = "m1";
      } else if (high2) {
        branch = 3;
        label = "m2";
      } else {
        branch = 4;
        label = config.w2 * a2 > config.w1 * a1 ? "m2" : "m1";
      }
      const FusionResult r = fuse({"m1", a1}, {"m2", a2}, config);
      if (r.label != label || r.branch != branch) ++grid_mismatches;
    }
  }

  // Two simulated recognizers whose confidence tracks correctness: fusion
  // must do at least as well as the better single mode.
  oracles::UnitRng rng(911);
  const int trials = 2000;
  int hits1 = 0, hits2 = 0, hits_fused = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const bool ok1 = rng() < 0.88, ok2 = rng() < 0.82;
    const ModeDecision d1{ok1 ? "truth" : "other",
                          ok1 ? 0.85 + 0.15 * rng() : 0.5 * rng()};
    const ModeDecision d2{ok2 ? "truth" : "other",
                          ok2 ? 0.85 + 0.15 * rng() : 0.5 * rng()};
    hits1 += ok1;
    hits2 += ok2;
    hits_fused += fuse(d1, d2, config).label == "truth";
  }
  const double acc1 = double(hits1) / trials, acc2 = double(hits2) / trials;
  const double fused_acc = double(hits_fused) / trials;
  report(11,
         rows_ok && grid_mismatches == 0 && fused_acc >= std::max(acc1, acc2),
         fmt("fusion rule rows exact, 101x101 grid clean, fused accuracy "
             "%.1f%% >= best single mode %.1f%%",
             fused_acc * 100.0, std::max(acc1, acc2) * 100.0));
}

// --- 12. keyframe segmentation boundaries ------------------------------------

Matrix ramp_grid(double cx, double cy) {
  Matrix g(5, 5);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      g(r, c) = cx * double(c) + cy * double(r);
    }
  }
  return g;
}

Matrix oriented_frame(double angle) {
  return ramp_grid(std::cos(angle), std::sin(angle));
}

void check_keyframe_boundaries() {
  bool ok = true;

  // One moving stretch between two plateaus.
  FrameSequence one;
  for (int t = 0; t < 5; ++t) one.push_back(oriented_frame(0.3));
  for (int t = 5; t < 25; ++t) one.push_back(oriented_frame(0.3 + 0.05 * t));
  for (int t = 25; t < 30; ++t) one.push_back(oriented_frame(1.2));
  const SegmentList single = keyframe_segments(one);
  ok = ok && single.size() == 1 && single[0].start == 5 && single[0].end == 24;

  // Two gestures separated by a middle plateau.
  FrameSequence two;
  for (int t = 0; t < 3; ++t) two.push_back(oriented_frame(0.1));
  for (int t = 3; t < 11; ++t) two.push_back(oriented_frame(0.1 + 0.07 * t));
  for (int t = 11; t < 16; ++t) two.push_back(oriented_frame(0.9));
  for (int t = 16; t < 25; ++t) two.push_back(oriented_frame(0.9 + 0.06 * t));
  for (int t = 25; t < 28; ++t) two.push_back(oriented_frame(2.4));
  const SegmentList pair = keyframe_segments(two);
  ok = ok && pair.size() == 2 && pair[0].start == 3 && pair[0].end == 10 &&
       pair[1].start == 16 && pair[1].end == 24;

  // Nothing moves: no segments at all.
  const FrameSequence still(12, oriented_frame(0.7));
  ok = ok && keyframe_segments(still).empty();

  report(12, ok,
         "keyframe segmentation reproduces the exact boundaries on three "
         "plateau fixtures");
}

// --- 13. dimensionality reduction bookkeeping --------------------------------

void check_pca() {
  oracles::UnitRng rng(1313);
  double worst_recon = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Matrix data(20, 5);
    for (double& v : data.data) v = rng();
    const PcaResult full = pca_reduce(data, 5);
    const PcaResult part = pca_reduce(data, 3);
    const Matrix rebuilt = pca_reconstruct(part.model, part.reduced);
    double err = 0.0;
    for (std::size_t i = 0; i < data.data.size(); ++i) {
      const double d = rebuilt.data[i] - data.data[i];
      err += d * d;
    }
    double discarded = 0.0;
    for (std::size_t i = 3; i < 5; ++i) discarded += full.model.eigenvalues[i];
    const double expected = discarded * 19.0;  // covariance used N-1 = 19
    worst_recon = std::max(
        worst_recon, std::abs(err - expected) / std::max(expected, 1e-30));
  }

  double worst_eigen = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix data(12, 3);
    for (double& v : data.data) v = 2.0 * rng() - 1.0;
    const PcaResult pca = pca_reduce(data, 3);

    std::vector<double> mean(3, 0.0);
    for (std::size_t r = 0; r < 12; ++r) {
      for (std::size_t c = 0; c < 3; ++c) mean[c] += data(r, c) / 12.0;
    }
    Matrix cov(3, 3);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        double acc = 0.0;
        for (std::size_t r = 0; r < 12; ++r) {
          acc += (data(r, a) - mean[a]) * (data(r, b) - mean[b]);
        }
        cov(a, b) = acc / 11.0;
      }
    }
    const std::vector<double> expected = oracles::symmetric3_eigenvalues(cov);
    for (std::size_t i = 0; i < 3; ++i) {
      worst_eigen = std::max(
          worst_eigen, std::abs(pca.model.eigenvalues[i] - expected[i]));
      // Eigenpair residual: C v must equal lambda v.
      for (std::size_t a = 0; a < 3; ++a) {
        double cv = 0.0;
        for (std::size_t b = 0; b < 3; ++b) {
          cv += cov(a, b) * pca.model.components(i, b);
        }
        worst_eigen = std::max(
            worst_eigen,
            std::abs(cv - pca.model.eigenvalues[i] *
                              pca.model.components(i, a)));
      }
    }
  }
  report(13, worst_recon <= 1e-8 && worst_eigen <= 1e-8,
         fmt("reduction bookkeeping: reconstruction error equals the "
             "discarded spectrum (rel err %.2e), 3x3 eigenpairs within %.2e",
             worst_recon, worst_eigen));
}

}  // namespace

int main() {
  std::printf("sequence-classification toolkit: release checks\n");
  check_pt_forward_brute();
  check_pt_viterbi_equals_forward();
  check_scaling_slopes();
  check_small_model_wall_time();
  check_synthetic_recognition();
  check_hmm_forward_and_training();
  check_dwt_reconstruction();
  check_dsp_constants();
  check_descriptor_rotation_invariance();
  check_codebook_training();
  check_decision_fusion();
  check_keyframe_boundaries();
  check_pca();
  std::printf("%d of 13 checks passed\n", 13 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
