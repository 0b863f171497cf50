#include "ptseq/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ptseq {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::runtime_error(message);
}

[[noreturn]] void fail_at(const std::string& path, std::size_t line,
                          const std::string& message) {
  fail(path + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_cell_double(const std::string& cell, const std::string& path,
                         std::size_t line) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size()) {
    fail_at(path, line, "not a number: '" + cell + "'");
  }
  return value;
}

long parse_cell_long(const std::string& cell, const std::string& path,
                     std::size_t line) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  long value = std::strtol(begin, &end, 10);
  if (cell.empty() || end != begin + cell.size()) {
    fail_at(path, line, "not an integer: '" + cell + "'");
  }
  return value;
}

// 17 significant digits: enough for any double to survive a reload bit-exact.
std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::ifstream open_input(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(path + ": cannot open file for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
  if (!out) fail(path + ": cannot open file for writing");
  return out;
}

std::string feature_header(std::size_t dim) {
  std::string header = "t";
  for (std::size_t d = 0; d < dim; ++d) {
    header += ",f" + std::to_string(d);
  }
  return header;
}

}  // namespace

FeatureSequence read_feature_csv(const std::string& path) {
  std::ifstream in = open_input(path, true);
  std::string line;
  if (!std::getline(in, line)) fail_at(path, 1, "missing header row");
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "t" || header.size() < 2) {
    fail_at(path, 1, "header must be t,f0,f1,...");
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t d = 0; d < dim; ++d) {
    if (header[d + 1] != "f" + std::to_string(d)) {
      fail_at(path, 1, "header column " + std::to_string(d + 2) +
                           " must be f" + std::to_string(d));
    }
  }

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;  // tolerate a trailing blank line
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != dim + 1) {
      fail_at(path, line_no,
              "expected " + std::to_string(dim + 1) + " columns, got " +
                  std::to_string(cells.size()));
    }
    parse_cell_double(cells[0], path, line_no);  // the step index
    for (std::size_t d = 0; d < dim; ++d) {
      values.push_back(parse_cell_double(cells[d + 1], path, line_no));
    }
    ++rows;
  }
  if (rows == 0) fail_at(path, line_no, "no data rows");

  FeatureSequence features(rows, dim);
  features.data = std::move(values);
  return features;
}

void write_feature_csv(const std::string& path, const FeatureSequence& features) {
  std::ofstream out = open_output(path);
  out << feature_header(features.cols) << "\n";
  for (std::size_t t = 0; t < features.rows; ++t) {
    out << t;
    for (std::size_t d = 0; d < features.cols; ++d) {
      out << ',' << format_double(features(t, d));
    }
    out << "\n";
  }
  if (!out) fail(path + ": write failed");
}

SymbolSequence read_symbol_csv(const std::string& path) {
  std::ifstream in = open_input(path, true);
  std::string line;
  if (!std::getline(in, line)) fail_at(path, 1, "missing header row");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() != 1 || header[0] != "sym") {
    fail_at(path, 1, "header must be exactly 'sym'");
  }

  SymbolSequence symbols;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 1) {
      fail_at(path, line_no, "expected a single column");
    }
    long value = parse_cell_long(cells[0], path, line_no);
    if (value < 0) fail_at(path, line_no, "symbol must be non-negative");
    symbols.push_back(static_cast<int>(value));
  }
  if (symbols.empty()) fail_at(path, line_no, "no data rows");
  return symbols;
}

void write_symbol_csv(const std::string& path, const SymbolSequence& symbols) {
  std::ofstream out = open_output(path);
  out << "sym\n";
  for (int s : symbols) out << s << "\n";
  if (!out) fail(path + ": write failed");
}

namespace {

std::uint16_t read_u16(std::ifstream& in, const std::string& path) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) fail(path + ": truncated file");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) fail(path + ": truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u16(std::ofstream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

void write_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

bool rate_supported(std::uint32_t rate) {
  return rate == 8000 || rate == 12500 || rate == 16000;
}

}  // namespace

Signal read_wav(const std::string& path) {
  std::ifstream in = open_input(path, true);
  char tag[4];
  if (!in.read(tag, 4) || std::memcmp(tag, "RIFF", 4) != 0) {
    fail(path + ": not a RIFF file");
  }
  read_u32(in, path);  // overall size, unused
  if (!in.read(tag, 4) || std::memcmp(tag, "WAVE", 4) != 0) {
    fail(path + ": not a WAVE file");
  }

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  std::vector<double> samples;
  bool have_data = false;

  while (in.read(tag, 4)) {
    std::uint32_t chunk_size = read_u32(in, path);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail(path + ": fmt chunk too short");
      std::uint16_t format = read_u16(in, path);
      std::uint16_t channels = read_u16(in, path);
      sample_rate = read_u32(in, path);
      read_u32(in, path);  // byte rate
      read_u16(in, path);  // block align
      std::uint16_t bits = read_u16(in, path);
      if (format != 1) fail(path + ": only PCM (format 1) is supported");
      if (channels != 1) fail(path + ": only mono audio is supported");
      if (bits != 16) fail(path + ": only 16-bit samples are supported");
      if (!rate_supported(sample_rate)) {
        fail(path + ": sample rate must be 8000, 12500, or 16000 Hz, got " +
             std::to_string(sample_rate));
      }
      in.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) fail(path + ": data chunk before fmt chunk");
      std::size_t count = chunk_size / 2;
      samples.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        std::uint16_t raw = read_u16(in, path);
        samples[i] = static_cast<std::int16_t>(raw) / 32768.0;
      }
      if (chunk_size % 2) in.ignore(1);
      have_data = true;
      break;
    } else {
      in.ignore(chunk_size + (chunk_size % 2));  // chunks are word-aligned
    }
  }
  if (!have_fmt) fail(path + ": missing fmt chunk");
  if (!have_data) fail(path + ": missing data chunk");

  Signal signal;
  signal.samples = std::move(samples);
  signal.sample_rate_hz = static_cast<double>(sample_rate);
  return signal;
}

void write_wav(const std::string& path, const Signal& signal) {
  std::uint32_t rate = static_cast<std::uint32_t>(signal.sample_rate_hz);
  if (!rate_supported(rate) ||
      signal.sample_rate_hz != static_cast<double>(rate)) {
    fail(path + ": sample rate must be 8000, 12500, or 16000 Hz");
  }
  std::ofstream out = open_output(path);
  std::uint32_t data_bytes = static_cast<std::uint32_t>(signal.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, rate);
  write_u32(out, rate * 2);  // byte rate
  write_u16(out, 2);         // block align
  write_u16(out, 16);        // bits per sample
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : signal.samples) {
    double clamped = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
    auto value = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    write_u16(out, static_cast<std::uint16_t>(value));
  }
  if (!out) fail(path + ": write failed");
}

namespace {

const std::set<std::string> kConfigKeys = {
    "frame_len",  "hop",        "num_coeffs",  "num_filters", "bank",
    "wavelet",    "denoise_levels", "e_factor", "vq_size",    "family",
    "algebra",    "num_states", "num_symbols", "fusion",      "seed",
    "train_max_iters", "train_tol"};

Algebra algebra_from_string(const std::string& name, const std::string& where) {
  if (name == "minmax") return Algebra::MinMax;
  if (name == "paper") return Algebra::PaperLiteral;
  fail(where + ": algebra must be 'minmax' or 'paper', got '" + name + "'");
}

std::string algebra_to_string(Algebra algebra) {
  return algebra == Algebra::MinMax ? "minmax" : "paper";
}

PipelineConfig parse_config_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + ": config must be a JSON object");
  for (const auto& item : j.items()) {
    if (kConfigKeys.find(item.key()) == kConfigKeys.end()) {
      fail(where + ": unknown config key '" + item.key() + "'");
    }
  }

  PipelineConfig config;
  if (j.contains("frame_len")) config.cepstra.frame_len = j.at("frame_len").get<std::size_t>();
  if (j.contains("hop")) config.cepstra.hop = j.at("hop").get<std::size_t>();
  if (j.contains("num_coeffs")) config.cepstra.num_coeffs = j.at("num_coeffs").get<int>();
  if (j.contains("num_filters")) config.cepstra.num_filters = j.at("num_filters").get<int>();
  if (j.contains("bank")) {
    std::string bank = j.at("bank").get<std::string>();
    if (bank == "mel") {
      config.cepstra.bank_kind = FilterBank::Kind::Mel;
    } else if (bank == "hfcc") {
      config.cepstra.bank_kind = FilterBank::Kind::Hfcc;
    } else {
      fail(where + ": bank must be 'mel' or 'hfcc', got '" + bank + "'");
    }
  }
  if (j.contains("wavelet")) {
    config.cepstra.wavelet = j.at("wavelet").get<std::string>();
    WaveletFilter::by_name(config.cepstra.wavelet);  // validates the name
  }
  if (j.contains("denoise_levels")) config.cepstra.denoise_levels = j.at("denoise_levels").get<int>();
  if (j.contains("e_factor")) config.cepstra.e_factor = j.at("e_factor").get<double>();
  if (j.contains("family")) {
    config.family = j.at("family").get<std::string>();
    if (config.family != "hmm" && config.family != "pthmm") {
      fail(where + ": family must be 'hmm' or 'pthmm', got '" + config.family + "'");
    }
  }
  if (j.contains("algebra")) {
    config.algebra = algebra_from_string(j.at("algebra").get<std::string>(), where);
  }
  if (j.contains("num_states")) config.num_states = j.at("num_states").get<std::size_t>();

  // The codebook feeds the models, so the symbol count and codebook size are
  // one knob: setting either fixes both, setting both requires agreement.
  bool has_k = j.contains("vq_size");
  bool has_m = j.contains("num_symbols");
  if (has_k) config.vq_size = j.at("vq_size").get<std::size_t>();
  if (has_m) config.num_symbols = j.at("num_symbols").get<std::size_t>();
  if (has_k && !has_m) config.num_symbols = config.vq_size;
  if (has_m && !has_k) config.vq_size = config.num_symbols;
  if (config.num_symbols != config.vq_size) {
    fail(where + ": num_symbols (" + std::to_string(config.num_symbols) +
         ") must equal vq_size (" + std::to_string(config.vq_size) + ")");
  }

  if (j.contains("fusion")) {
    const json& f = j.at("fusion");
    if (!f.is_object()) fail(where + ": fusion must be a JSON object");
    for (const auto& item : f.items()) {
      const std::string& key = item.key();
      if (key != "theta1" && key != "theta2" && key != "w1" && key != "w2") {
        fail(where + ": unknown fusion key '" + key + "'");
      }
    }
    if (f.contains("theta1")) config.fusion.theta1 = f.at("theta1").get<double>();
    if (f.contains("theta2")) config.fusion.theta2 = f.at("theta2").get<double>();
    if (f.contains("w1")) config.fusion.w1 = f.at("w1").get<double>();
    if (f.contains("w2")) config.fusion.w2 = f.at("w2").get<double>();
  }
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("train_max_iters")) config.train_max_iters = j.at("train_max_iters").get<int>();
  if (j.contains("train_tol")) config.train_tol = j.at("train_tol").get<double>();

  if (config.num_states == 0) fail(where + ": num_states must be positive");
  if (config.num_symbols == 0) fail(where + ": num_symbols must be positive");
  if (config.train_max_iters < 1) fail(where + ": train_max_iters must be positive");
  if (config.train_tol <= 0.0) fail(where + ": train_tol must be positive");
  return config;
}

void write_config_json(std::ostream& out, const PipelineConfig& config,
                       const std::string& indent) {
  const std::string pad = indent + "  ";
  out << "{\n";
  out << pad << "\"frame_len\": " << config.cepstra.frame_len << ",\n";
  out << pad << "\"hop\": " << config.cepstra.hop << ",\n";
  out << pad << "\"num_coeffs\": " << config.cepstra.num_coeffs << ",\n";
  out << pad << "\"num_filters\": " << config.cepstra.num_filters << ",\n";
  out << pad << "\"bank\": \""
      << (config.cepstra.bank_kind == FilterBank::Kind::Mel ? "mel" : "hfcc")
      << "\",\n";
  out << pad << "\"wavelet\": \"" << config.cepstra.wavelet << "\",\n";
  out << pad << "\"denoise_levels\": " << config.cepstra.denoise_levels << ",\n";
  out << pad << "\"e_factor\": " << format_double(config.cepstra.e_factor) << ",\n";
  out << pad << "\"vq_size\": " << config.vq_size << ",\n";
  out << pad << "\"family\": \"" << config.family << "\",\n";
  out << pad << "\"algebra\": \"" << algebra_to_string(config.algebra) << "\",\n";
  out << pad << "\"num_states\": " << config.num_states << ",\n";
  out << pad << "\"num_symbols\": " << config.num_symbols << ",\n";
  out << pad << "\"fusion\": {\"theta1\": " << format_double(config.fusion.theta1)
      << ", \"theta2\": " << format_double(config.fusion.theta2)
      << ", \"w1\": " << format_double(config.fusion.w1)
      << ", \"w2\": " << format_double(config.fusion.w2) << "},\n";
  out << pad << "\"seed\": " << config.seed << ",\n";
  out << pad << "\"train_max_iters\": " << config.train_max_iters << ",\n";
  out << pad << "\"train_tol\": " << format_double(config.train_tol) << "\n";
  out << indent << "}";
}

void write_matrix_json(std::ostream& out, const Matrix& m,
                       const std::string& indent) {
  out << "[\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    out << indent << "  [";
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ", ";
      out << format_double(m(r, c));
    }
    out << "]" << (r + 1 < m.rows ? "," : "") << "\n";
  }
  out << indent << "]";
}

void write_vector_json(std::ostream& out, const std::vector<double>& v) {
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << format_double(v[i]);
  }
  out << "]";
}

std::string escape_json(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') {
      out += '\\';
      out += ch;
    } else if (static_cast<unsigned char>(ch) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", ch);
      out += buf;
    } else {
      out += ch;
    }
  }
  return out;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                        const std::string& where) {
  if (!j.is_array() || j.size() != rows) {
    fail(where + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (!row.is_array() || row.size() != cols) {
      fail(where + ": row " + std::to_string(r) + " must have " +
           std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

std::vector<double> vector_from_json(const json& j, std::size_t n,
                                     const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    fail(where + ": expected " + std::to_string(n) + " entries");
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in = open_input(path, true);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
  return parse_config_json(j, path);
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "{\n";
  out << "  \"format_version\": " << bundle.format_version << ",\n";
  out << "  \"config\": ";
  write_config_json(out, bundle.config, "  ");
  out << ",\n";

  out << "  \"codebooks\": [\n";
  for (std::size_t i = 0; i < bundle.codebooks.size(); ++i) {
    const LabeledCodebook& cb = bundle.codebooks[i];
    out << "    {\"label\": \"" << escape_json(cb.label) << "\", \"centroids\": ";
    write_matrix_json(out, cb.codebook.centroids, "    ");
    out << "}" << (i + 1 < bundle.codebooks.size() ? "," : "") << "\n";
  }
  out << "  ],\n";

  out << "  \"models\": [\n";
  for (std::size_t i = 0; i < bundle.models.size(); ++i) {
    const LabeledModel& lm = bundle.models[i];
    const bool is_hmm = lm.kind == "hmm";
    const std::size_t n = is_hmm ? lm.hmm.num_states : lm.pthmm.num_states;
    const std::size_t m = is_hmm ? lm.hmm.num_symbols : lm.pthmm.num_symbols;
    out << "    {\n";
    out << "      \"label\": \"" << escape_json(lm.label) << "\",\n";
    out << "      \"kind\": \"" << lm.kind << "\",\n";
    out << "      \"N\": " << n << ",\n";
    out << "      \"M\": " << m << ",\n";
    out << "      \"transition\": ";
    write_matrix_json(out, is_hmm ? lm.hmm.transition : lm.pthmm.transition_poss,
                      "      ");
    out << ",\n";
    out << "      \"emission\": ";
    write_matrix_json(out, is_hmm ? lm.hmm.emission : lm.pthmm.emission_poss,
                      "      ");
    out << ",\n";
    out << "      \"initial\": ";
    write_vector_json(out, is_hmm ? lm.hmm.initial : lm.pthmm.initial_poss);
    out << ",\n";
    out << "      \"algebra\": \""
        << (is_hmm ? std::string("none") : algebra_to_string(lm.pthmm.algebra))
        << "\"";
    if (!is_hmm) {
      out << ",\n      \"max_normalized\": "
          << (lm.pthmm.max_normalized ? "true" : "false");
    }
    out << "\n    }" << (i + 1 < bundle.models.size() ? "," : "") << "\n";
  }
  out << "  ]\n";
  out << "}\n";
  if (!out) fail(path + ": write failed");
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in = open_input(path, true);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
  if (!j.is_object()) fail(path + ": bundle must be a JSON object");
  for (const char* key : {"format_version", "config", "codebooks", "models"}) {
    if (!j.contains(key)) fail(path + ": missing key '" + std::string(key) + "'");
  }

  ModelBundle bundle;
  bundle.format_version = j.at("format_version").get<int>();
  if (bundle.format_version != 1) {
    fail(path + ": unsupported format_version " +
         std::to_string(bundle.format_version));
  }
  bundle.config = parse_config_json(j.at("config"), path);

  const json& cbs = j.at("codebooks");
  if (!cbs.is_array()) fail(path + ": codebooks must be an array");
  for (std::size_t i = 0; i < cbs.size(); ++i) {
    const json& entry = cbs.at(i);
    const std::string where = path + ": codebooks[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("label") ||
        !entry.contains("centroids")) {
      fail(where + ": needs label and centroids");
    }
    LabeledCodebook cb;
    cb.label = entry.at("label").get<std::string>();
    const json& cents = entry.at("centroids");
    if (!cents.is_array() || cents.empty() || !cents.at(0).is_array() ||
        cents.at(0).empty()) {
      fail(where + ": centroids must be a non-empty matrix");
    }
    cb.codebook.centroids =
        matrix_from_json(cents, cents.size(), cents.at(0).size(), where);
    bundle.codebooks.push_back(std::move(cb));
  }

  const json& models = j.at("models");
  if (!models.is_array()) fail(path + ": models must be an array");
  for (std::size_t i = 0; i < models.size(); ++i) {
    const json& entry = models.at(i);
    const std::string where = path + ": models[" + std::to_string(i) + "]";
    for (const char* key :
         {"label", "kind", "N", "M", "transition", "emission", "initial",
          "algebra"}) {
      if (!entry.contains(key)) {
        fail(where + ": missing key '" + std::string(key) + "'");
      }
    }
    LabeledModel lm;
    lm.label = entry.at("label").get<std::string>();
    lm.kind = entry.at("kind").get<std::string>();
    const auto n = entry.at("N").get<std::size_t>();
    const auto m = entry.at("M").get<std::size_t>();
    const std::string algebra = entry.at("algebra").get<std::string>();
    if (lm.kind == "hmm") {
      if (algebra != "none") {
        fail(where + ": hmm models take algebra 'none', got '" + algebra + "'");
      }
      lm.hmm.num_states = n;
      lm.hmm.num_symbols = m;
      lm.hmm.transition =
          matrix_from_json(entry.at("transition"), n, n, where + ".transition");
      lm.hmm.emission =
          matrix_from_json(entry.at("emission"), n, m, where + ".emission");
      lm.hmm.initial = vector_from_json(entry.at("initial"), n, where + ".initial");
      hmm_validate(lm.hmm);
    } else if (lm.kind == "pthmm") {
      lm.pthmm.num_states = n;
      lm.pthmm.num_symbols = m;
      lm.pthmm.algebra = algebra_from_string(algebra, where);
      lm.pthmm.transition_poss =
          matrix_from_json(entry.at("transition"), n, n, where + ".transition");
      lm.pthmm.emission_poss =
          matrix_from_json(entry.at("emission"), n, m, where + ".emission");
      lm.pthmm.initial_poss =
          vector_from_json(entry.at("initial"), n, where + ".initial");
      if (entry.contains("max_normalized")) {
        lm.pthmm.max_normalized = entry.at("max_normalized").get<bool>();
      }
      pt_validate(lm.pthmm);
    } else {
      fail(where + ": kind must be 'hmm' or 'pthmm', got '" + lm.kind + "'");
    }
    bundle.models.push_back(std::move(lm));
  }
  return bundle;
}

}  // namespace ptseq
