#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptseq/bench.hpp"
#include "ptseq/dsp.hpp"
#include "ptseq/fusion.hpp"
#include "ptseq/hmm.hpp"
#include "ptseq/io.hpp"
#include "ptseq/pthmm.hpp"
#include "ptseq/vq.hpp"

namespace fs = std::filesystem;
using namespace ptseq;

namespace {

bool log_enabled() {
  const char* v = std::getenv("PTSEQ_LOG");
  return v && *v && std::strcmp(v, "0") != 0 && std::strcmp(v, "off") != 0;
}

void log_line(const std::string& message) {
  if (log_enabled()) std::cerr << "[ptseq] " << message << "\n";
}

std::string single_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::uint64_t class_seed(std::uint64_t base, std::size_t index) {
  return base + 7919 * (index + 1);
}

FeatureSequence load_input_features(const std::string& path,
                                    const CepstralConfig& cepstra) {
  if (ends_with(path, ".wav")) {
    return extract_cepstral_features(read_wav(path), cepstra);
  }
  if (ends_with(path, ".csv")) {
    return read_feature_csv(path);
  }
  throw std::runtime_error(path + ": input must be a .wav or .csv file");
}

struct RankedScore {
  std::string label;
  double score = 0.0;
};

struct BundleScores {
  std::vector<RankedScore> ranked;
  double top_confidence = 0.0;  // in [0,1], for the fusion rule
};

BundleScores score_bundle(const ModelBundle& bundle, const std::string& input) {
  if (bundle.models.empty()) {
    throw std::runtime_error("bundle has no models");
  }
  FeatureSequence features = load_input_features(input, bundle.config.cepstra);

  std::vector<RankedScore> scores;
  for (const LabeledModel& lm : bundle.models) {
    const LabeledCodebook* codebook = nullptr;
    for (const LabeledCodebook& cb : bundle.codebooks) {
      if (cb.label == lm.label) {
        codebook = &cb;
        break;
      }
    }
    if (!codebook) {
      throw std::runtime_error("no codebook for class '" + lm.label + "'");
    }
    if (codebook->codebook.centroids.cols != features.cols) {
      throw std::runtime_error(
          "input feature dimension " + std::to_string(features.cols) +
          " does not match codebook dimension " +
          std::to_string(codebook->codebook.centroids.cols) + " for class '" +
          lm.label + "'");
    }
    const std::size_t symbols =
        lm.kind == "hmm" ? lm.hmm.num_symbols : lm.pthmm.num_symbols;
    if (codebook->codebook.centroids.rows != symbols) {
      throw std::runtime_error(
          "codebook size " + std::to_string(codebook->codebook.centroids.rows) +
          " does not match model symbol count " + std::to_string(symbols) +
          " for class '" + lm.label + "'");
    }
    SymbolSequence obs = quantize(codebook->codebook, features);
    double score = lm.kind == "hmm"
                       ? hmm_forward_log_likelihood(lm.hmm, obs)
                       : pt_forward(lm.pthmm, obs).possibility;
    scores.push_back({lm.label, score});
  }
  std::sort(scores.begin(), scores.end(),
            [](const RankedScore& a, const RankedScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.label < b.label;
            });

  BundleScores out;
  out.ranked = scores;
  if (bundle.models[0].kind == "hmm") {
    // Posterior of the leader under uniform priors via log-sum-exp.
    double top = scores[0].score;
    if (std::isfinite(top)) {
      double sum = 0.0;
      for (const RankedScore& s : scores) sum += std::exp(s.score - top);
      out.top_confidence = 1.0 / sum;
    }
  } else {
    out.top_confidence = scores[0].score;  // a possibility degree already
  }
  return out;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::runtime_error(output_path + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(output_path + ": write failed");
    std::cout << "wrote " << output_path << "\n";
  }
}

int run_train(const std::string& data_dir, const std::string& config_path,
              const std::string& algebra_flag, const std::string& family_flag,
              bool seed_set, std::uint64_t seed, const std::string& output) {
  PipelineConfig config =
      config_path.empty() ? PipelineConfig{} : load_config(config_path);
  if (seed_set) config.seed = seed;
  if (!algebra_flag.empty()) {
    config.algebra =
        algebra_flag == "paper" ? Algebra::PaperLiteral : Algebra::MinMax;
  }
  if (!family_flag.empty()) config.family = family_flag;

  if (!fs::is_directory(data_dir)) {
    throw std::runtime_error(data_dir + ": not a directory");
  }
  std::vector<fs::path> class_dirs;
  for (const fs::directory_entry& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) {
    throw std::runtime_error(data_dir + ": no class directories found");
  }

  ModelBundle bundle;
  bundle.config = config;
  for (std::size_t ci = 0; ci < class_dirs.size(); ++ci) {
    const std::string label = class_dirs[ci].filename().string();
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry :
         fs::directory_iterator(class_dirs[ci])) {
      if (!entry.is_regular_file()) continue;
      std::string name = entry.path().string();
      if (ends_with(name, ".wav") || ends_with(name, ".csv")) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw std::runtime_error("class '" + label +
                               "' has no training files (.wav or .csv)");
    }

    std::vector<FeatureSequence> sequences;
    for (const fs::path& file : files) {
      sequences.push_back(load_input_features(file.string(), config.cepstra));
    }
    const std::size_t dim = sequences[0].cols;
    std::size_t total_rows = 0;
    for (std::size_t si = 0; si < sequences.size(); ++si) {
      if (sequences[si].cols != dim) {
        throw std::runtime_error("class '" + label + "': file " +
                                 files[si].string() + " has dimension " +
                                 std::to_string(sequences[si].cols) +
                                 ", expected " + std::to_string(dim));
      }
      total_rows += sequences[si].rows;
    }

    Matrix stacked(total_rows, dim);
    std::size_t at = 0;
    for (const FeatureSequence& seq : sequences) {
      std::copy(seq.data.begin(), seq.data.end(), stacked.data.begin() + at);
      at += seq.data.size();
    }
    log_line("training class '" + label + "': " +
             std::to_string(sequences.size()) + " sequences, " +
             std::to_string(total_rows) + " frames");

    Codebook codebook = lbg_train(stacked, config.vq_size);
    std::vector<SymbolSequence> symbol_seqs;
    for (const FeatureSequence& seq : sequences) {
      symbol_seqs.push_back(quantize(codebook, seq));
    }

    LabeledModel lm;
    lm.label = label;
    lm.kind = config.family;
    const std::uint64_t cseed = class_seed(config.seed, ci);
    if (config.family == "hmm") {
      HmmTrainConfig tc;
      tc.max_iters = config.train_max_iters;
      tc.tol = config.train_tol;
      HmmModel init = random_hmm(config.num_states, config.num_symbols, cseed);
      lm.hmm = hmm_train(init, symbol_seqs, tc).model;
    } else {
      PtTrainConfig tc;
      tc.max_iters = config.train_max_iters;
      tc.tol = config.train_tol;
      PthmmModel init = random_pthmm(config.num_states, config.num_symbols,
                                     cseed, config.algebra, true);
      lm.pthmm = pt_learn(init, symbol_seqs, tc).model;
    }
    bundle.codebooks.push_back({label, std::move(codebook)});
    bundle.models.push_back(std::move(lm));
  }

  save_bundle(bundle, output);
  std::cout << "wrote " << output << ": " << bundle.models.size()
            << " classes, family=" << config.family << "\n";
  return 0;
}

int run_classify(const std::string& input, const std::string& bundle_path,
                 const std::string& fuse_path, const std::string& input2,
                 const std::string& output) {
  ModelBundle bundle = load_bundle(bundle_path);
  BundleScores primary = score_bundle(bundle, input);

  std::string text;
  if (fuse_path.empty()) {
    for (const RankedScore& s : primary.ranked) {
      text += s.label + "," + fmt17(s.score) + "\n";
    }
  } else {
    ModelBundle second = load_bundle(fuse_path);
    std::vector<std::string> labels1, labels2;
    for (const LabeledModel& lm : bundle.models) labels1.push_back(lm.label);
    for (const LabeledModel& lm : second.models) labels2.push_back(lm.label);
    std::sort(labels1.begin(), labels1.end());
    std::sort(labels2.begin(), labels2.end());
    if (labels1 != labels2) {
      throw std::runtime_error(
          "bundles classify different label sets; fusion needs matching classes");
    }
    BundleScores other =
        score_bundle(second, input2.empty() ? input : input2);
    ModeDecision d1{primary.ranked[0].label, primary.top_confidence};
    ModeDecision d2{other.ranked[0].label, other.top_confidence};
    FusionResult fused = fuse(d1, d2, bundle.config.fusion);
    text += "fused," + fused.label + ",branch=" + std::to_string(fused.branch) + "\n";
    text += "mode1," + d1.label + "," + fmt17(d1.likelihood) + "\n";
    text += "mode2," + d2.label + "," + fmt17(d2.likelihood) + "\n";
  }
  emit(text, output);
  return 0;
}

int run_features(const std::string& input, const std::string& config_path,
                 const std::string& output) {
  if (!ends_with(input, ".wav")) {
    throw std::runtime_error(input + ": features expects a .wav input");
  }
  PipelineConfig config =
      config_path.empty() ? PipelineConfig{} : load_config(config_path);
  FeatureSequence features =
      extract_cepstral_features(read_wav(input), config.cepstra);
  write_feature_csv(output, features);
  std::cout << "wrote " << output << ": " << features.rows << " frames, "
            << features.cols << " coefficients\n";
  return 0;
}

int run_bench(std::vector<std::size_t> sizes, std::size_t t_len, int trials,
              std::uint64_t seed, const std::string& output) {
  log_line("benchmarking " + std::to_string(sizes.size()) + " state counts at t=" +
           std::to_string(t_len));
  BenchmarkReport report = benchmark_run(sizes, t_len, trials, seed);
  std::ostringstream buffer;
  write_benchmark_report(report, buffer);
  emit(buffer.str(), output);
  return 0;
}

int run_fuse(const std::string& label1, double conf1, const std::string& label2,
             double conf2, const FusionConfig& config) {
  FusionResult result = fuse({label1, conf1}, {label2, conf2}, config);
  std::cout << result.label << ",branch=" << result.branch << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"possibilistic and probabilistic sequence classification"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train per-class codebooks and models");
  std::string train_data, train_config, train_algebra, train_family;
  std::string train_output = "bundle.json";
  std::uint64_t train_seed = 0;
  train_cmd->add_option("--data", train_data, "dataset root, one subdirectory per class")
      ->required();
  train_cmd->add_option("--config", train_config, "pipeline config JSON");
  train_cmd->add_option("--algebra", train_algebra, "possibilistic conjunction")
      ->check(CLI::IsMember({"minmax", "paper"}));
  train_cmd->add_option("--family", train_family, "model family")
      ->check(CLI::IsMember({"hmm", "pthmm"}));
  auto* seed_opt = train_cmd->add_option("--seed", train_seed, "random seed");
  train_cmd->add_option("--output", train_output, "bundle path");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "rank classes for one input");
  std::string cls_input, cls_bundle, cls_fuse, cls_input2, cls_output;
  classify_cmd->add_option("input", cls_input, ".wav or feature .csv")->required();
  classify_cmd->add_option("--bundle", cls_bundle, "trained bundle")->required();
  classify_cmd->add_option("--fuse", cls_fuse, "second bundle for decision fusion");
  classify_cmd->add_option("--input2", cls_input2, "input for the second bundle");
  classify_cmd->add_option("--output", cls_output, "write results here instead of stdout");

  // features
  auto* features_cmd = app.add_subcommand("features", "extract cepstral features");
  std::string feat_input, feat_config, feat_output = "features.csv";
  features_cmd->add_option("input", feat_input, ".wav audio")->required();
  features_cmd->add_option("--config", feat_config, "pipeline config JSON");
  features_cmd->add_option("--output", feat_output, "feature CSV path");

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "compare probabilistic and possibilistic forward-pass scaling");
  std::vector<std::size_t> bench_sizes = {8, 16, 32, 64, 128};
  std::size_t bench_t = 2000;
  int bench_trials = 3;
  std::uint64_t bench_seed = 42;
  std::string bench_output;
  bench_cmd->add_option("--sizes", bench_sizes, "state counts (needs >= 4)")
      ->delimiter(',');
  bench_cmd->add_option("--t-len", bench_t, "sequence length");
  bench_cmd->add_option("--trials", bench_trials, "timed repetitions per size");
  bench_cmd->add_option("--seed", bench_seed, "random seed");
  bench_cmd->add_option("--output", bench_output, "report path (stdout otherwise)");

  // fuse
  auto* fuse_cmd = app.add_subcommand("fuse", "apply the two-mode decision rule");
  std::string fuse_label1, fuse_label2, fuse_config_path;
  double fuse_conf1 = 0.0, fuse_conf2 = 0.0;
  fuse_cmd->add_option("--label1", fuse_label1, "mode 1 label")->required();
  fuse_cmd->add_option("--conf1", fuse_conf1, "mode 1 likelihood in [0,1]")->required();
  fuse_cmd->add_option("--label2", fuse_label2, "mode 2 label")->required();
  fuse_cmd->add_option("--conf2", fuse_conf2, "mode 2 likelihood in [0,1]")->required();
  fuse_cmd->add_option("--config", fuse_config_path, "pipeline config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "PTSEQ_ERROR: " << single_line(e.what()) << "\n";
    return 1;
  }

  try {
    if (*train_cmd) {
      return run_train(train_data, train_config, train_algebra, train_family,
                       seed_opt->count() > 0, train_seed, train_output);
    }
    if (*classify_cmd) {
      return run_classify(cls_input, cls_bundle, cls_fuse, cls_input2, cls_output);
    }
    if (*features_cmd) {
      return run_features(feat_input, feat_config, feat_output);
    }
    if (*bench_cmd) {
      return run_bench(bench_sizes, bench_t, bench_trials, bench_seed,
                       bench_output);
    }
    if (*fuse_cmd) {
      FusionConfig config;
      if (!fuse_config_path.empty()) config = load_config(fuse_config_path).fusion;
      return run_fuse(fuse_label1, fuse_conf1, fuse_label2, fuse_conf2, config);
    }
  } catch (const std::exception& e) {
    std::cerr << "PTSEQ_ERROR: " << single_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
