#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptseq/dsp.hpp"
#include "ptseq/fusion.hpp"
#include "ptseq/hmm.hpp"
#include "ptseq/matrix.hpp"
#include "ptseq/pthmm.hpp"
#include "ptseq/vq.hpp"

namespace ptseq {

// Feature CSV: header `t,f0,...,f{D-1}`, one row per step, LF endings.
// Symbol CSV: a single `sym` column of integers.
// Parse errors name the file and 1-based line number.
FeatureSequence read_feature_csv(const std::string& path);
void write_feature_csv(const std::string& path, const FeatureSequence& features);
SymbolSequence read_symbol_csv(const std::string& path);
void write_symbol_csv(const std::string& path, const SymbolSequence& symbols);

// PCM WAV, 16-bit signed little-endian, mono, 8000/12500/16000 Hz.
Signal read_wav(const std::string& path);
void write_wav(const std::string& path, const Signal& signal);

struct PipelineConfig {
  CepstralConfig cepstra;
  std::size_t vq_size = 4;         // K, the codebook size
  std::string family = "pthmm";    // "hmm" or "pthmm"
  Algebra algebra = Algebra::MinMax;
  std::size_t num_states = 4;      // N
  std::size_t num_symbols = 4;     // M; must equal vq_size when VQ feeds models
  FusionConfig fusion;
  std::uint64_t seed = 0;
  int train_max_iters = 100;
  double train_tol = 1e-4;
};

// JSON config; missing keys take the defaults above, unknown keys are
// rejected by name, and num_symbols defaults to vq_size when only the
// latter is given.
PipelineConfig load_config(const std::string& path);

struct LabeledCodebook {
  std::string label;
  Codebook codebook;
};

struct LabeledModel {
  std::string label;
  std::string kind;  // "hmm" or "pthmm"
  HmmModel hmm;      // filled when kind == "hmm"
  PthmmModel pthmm;  // filled when kind == "pthmm"
};

struct ModelBundle {
  int format_version = 1;
  PipelineConfig config;
  std::vector<LabeledCodebook> codebooks;
  std::vector<LabeledModel> models;
};

// Single JSON document with keys format_version/config/codebooks/models;
// every number is written with 17 significant digits so a reload reproduces
// the exact same doubles.
void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace ptseq
