#include "ptseq/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptseq {

namespace {

constexpr double kLogFloor = 1e-10;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// One analysis step: periodic convolution and downsample by two. The filter
// window for output j starts at sample 2j - (flen - 2), so the wrap picks up
// the tail of the signal, matching the usual periodized pyramid alignment.
void analyze_step(const std::vector<double>& x, const WaveletFilter& f,
                  std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t n = x.size();
  const std::size_t flen = f.low_pass.size();
  const std::size_t half = n / 2;
  const std::size_t offset = flen - 2;
  approx.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (std::size_t j = 0; j < half; ++j) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t k = 0; k < flen; ++k) {
      const double s = x[(2 * j + n - offset + k) % n];
      a += f.low_pass[k] * s;
      d += f.high_pass[k] * s;
    }
    approx[j] = a;
    detail[j] = d;
  }
}

// Adjoint of analyze_step; exact inverse because the filter pair is
// orthonormal with shift-two orthogonality.
std::vector<double> synthesize_step(const std::vector<double>& approx,
                                    const std::vector<double>& detail,
                                    const WaveletFilter& f) {
  const std::size_t half = approx.size();
  const std::size_t n = 2 * half;
  const std::size_t flen = f.low_pass.size();
  const std::size_t offset = flen - 2;
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < half; ++j) {
    for (std::size_t k = 0; k < flen; ++k) {
      x[(2 * j + n - offset + k) % n] +=
          f.low_pass[k] * approx[j] + f.high_pass[k] * detail[j];
    }
  }
  return x;
}

// Working lengths per level; odd lengths are edge-replicated to even.
std::vector<std::size_t> level_lengths(std::size_t original, int levels) {
  std::vector<std::size_t> lens(static_cast<std::size_t>(levels) + 1);
  lens[0] = original;
  for (int l = 0; l < levels; ++l) {
    lens[l + 1] = (lens[l] + (lens[l] % 2)) / 2;
  }
  return lens;
}

std::vector<double> column_of(const Matrix& m, std::size_t c) {
  std::vector<double> col(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) col[r] = m(r, c);
  return col;
}

}  // namespace

WaveletFilter WaveletFilter::d4() {
  const double s3 = std::sqrt(3.0);
  const double denom = 4.0 * std::sqrt(2.0);
  WaveletFilter f;
  f.low_pass = {(1.0 + s3) / denom, (3.0 + s3) / denom,
                (3.0 - s3) / denom, (1.0 - s3) / denom};
  f.high_pass = {f.low_pass[3], -f.low_pass[2], f.low_pass[1], -f.low_pass[0]};
  f.name = "D4";
  return f;
}

WaveletFilter WaveletFilter::d6() {
  WaveletFilter f;
  f.low_pass = {0.3326705529500826,  0.8068915093110926, 0.4598775021184916,
                -0.1350110200102546, -0.0854412738820267, 0.0352262918857095};
  f.high_pass.resize(6);
  for (std::size_t k = 0; k < 6; ++k) {
    f.high_pass[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.low_pass[5 - k];
  }
  f.name = "D6";
  return f;
}

WaveletFilter WaveletFilter::by_name(const std::string& name) {
  if (name == "D4" || name == "d4") return d4();
  if (name == "D6" || name == "d6") return d6();
  throw std::invalid_argument("unknown wavelet filter: " + name);
}

DwtCoefficients dwt1d(const Signal& signal, const WaveletFilter& filter,
                      int levels) {
  if (levels < 1) throw std::invalid_argument("dwt1d needs levels >= 1");
  if (signal.samples.empty()) throw std::invalid_argument("dwt1d needs a nonempty signal");
  const std::size_t flen = filter.low_pass.size();
  if (signal.samples.size() < flen) {
    throw std::invalid_argument("signal shorter than filter");
  }

  DwtCoefficients out;
  out.levels = levels;
  out.original_length = signal.samples.size();
  out.sample_rate_hz = signal.sample_rate_hz;

  std::vector<double> current = signal.samples;
  std::vector<std::vector<double>> details;
  for (int l = 0; l < levels; ++l) {
    if (current.size() % 2 != 0) current.push_back(current.back());
    if (current.size() < flen) {
      throw std::invalid_argument("too many levels for this signal length");
    }
    std::vector<double> approx;
    std::vector<double> detail;
    analyze_step(current, filter, approx, detail);
    details.push_back(std::move(detail));
    current = std::move(approx);
  }
  out.approx = std::move(current);
  // finest last
  out.details.assign(details.rbegin(), details.rend());
  return out;
}

Signal idwt1d(const DwtCoefficients& coeffs, const WaveletFilter& filter) {
  if (coeffs.levels < 1 || coeffs.details.size() != static_cast<std::size_t>(coeffs.levels)) {
    throw std::invalid_argument("coefficient levels do not match detail count");
  }
  const auto lens = level_lengths(coeffs.original_length, coeffs.levels);
  if (coeffs.approx.size() != lens[coeffs.levels]) {
    throw std::invalid_argument("approximation length does not match level structure");
  }
  std::vector<double> current = coeffs.approx;
  for (int l = coeffs.levels; l >= 1; --l) {
    const auto& detail = coeffs.details[static_cast<std::size_t>(coeffs.levels - l)];
    if (detail.size() != lens[l]) {
      throw std::invalid_argument("detail length does not match level structure");
    }
    current = synthesize_step(current, detail, filter);
    current.resize(lens[l - 1]);  // drop the replicated pad sample, if any
  }
  return Signal{std::move(current), coeffs.sample_rate_hz};
}

Dwt2d dwt2d(const Matrix& grid, const WaveletFilter& filter) {
  const std::size_t flen = filter.low_pass.size();
  if (grid.rows < flen || grid.cols < flen) {
    throw std::invalid_argument("grid dimensions below filter length");
  }

  Matrix g = grid;
  if (g.cols % 2 != 0) {
    Matrix wide(g.rows, g.cols + 1);
    for (std::size_t r = 0; r < g.rows; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) wide(r, c) = g(r, c);
      wide(r, g.cols) = g(r, g.cols - 1);
    }
    g = std::move(wide);
  }
  if (g.rows % 2 != 0) {
    Matrix tall(g.rows + 1, g.cols);
    for (std::size_t r = 0; r < g.rows; ++r) {
      for (std::size_t c = 0; c < g.cols; ++c) tall(r, c) = g(r, c);
    }
    for (std::size_t c = 0; c < g.cols; ++c) tall(g.rows, c) = g(g.rows - 1, c);
    g = std::move(tall);
  }

  const std::size_t half_cols = g.cols / 2;
  const std::size_t half_rows = g.rows / 2;

  Matrix row_low(g.rows, half_cols);
  Matrix row_high(g.rows, half_cols);
  std::vector<double> a, d;
  for (std::size_t r = 0; r < g.rows; ++r) {
    std::vector<double> row(g.row(r), g.row(r) + g.cols);
    analyze_step(row, filter, a, d);
    std::copy(a.begin(), a.end(), row_low.row(r));
    std::copy(d.begin(), d.end(), row_high.row(r));
  }

  Dwt2d out;
  out.ll = Matrix(half_rows, half_cols);
  out.lh = Matrix(half_rows, half_cols);
  out.hl = Matrix(half_rows, half_cols);
  out.hh = Matrix(half_rows, half_cols);
  for (std::size_t c = 0; c < half_cols; ++c) {
    analyze_step(column_of(row_low, c), filter, a, d);
    for (std::size_t r = 0; r < half_rows; ++r) {
      out.ll(r, c) = a[r];
      out.lh(r, c) = d[r];
    }
    analyze_step(column_of(row_high, c), filter, a, d);
    for (std::size_t r = 0; r < half_rows; ++r) {
      out.hl(r, c) = a[r];
      out.hh(r, c) = d[r];
    }
  }
  return out;
}

std::vector<double> hamming_window(std::size_t n) {
  if (n < 2) throw std::invalid_argument("hamming window needs n >= 2");
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<double> power_spectrum(const std::vector<double>& frame) {
  if (frame.empty()) throw std::invalid_argument("power_spectrum needs a nonempty frame");
  const std::size_t n = next_pow2(frame.size());
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < frame.size(); ++i) a[i] = frame[i];
  fft_radix2(a);
  std::vector<double> psd(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    psd[k] = std::norm(a[k]) / static_cast<double>(n);
  }
  return psd;
}

double mel_scale(double f_hz) {
  if (f_hz < 0.0) throw std::invalid_argument("mel_scale needs f >= 0");
  return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_inverse(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double erb_bandwidth(double fc_khz) {
  if (fc_khz <= 0.0) throw std::invalid_argument("erb_bandwidth needs fc > 0");
  return 6.23 * fc_khz * fc_khz + 93.39 * fc_khz + 28.52;
}

FilterBank build_filterbank(FilterBank::Kind kind, int num_filters,
                            double f_low_hz, double f_high_hz,
                            std::size_t fft_size, double sample_rate_hz,
                            double e_factor) {
  if (num_filters < 1) throw std::invalid_argument("filter bank needs num_filters >= 1");
  if (e_factor <= 0.0) throw std::invalid_argument("filter bank needs e_factor > 0");
  const double nyquist = sample_rate_hz / 2.0;
  if (!(0.0 <= f_low_hz && f_low_hz < f_high_hz && f_high_hz <= nyquist)) {
    throw std::invalid_argument("invalid filter bank frequency range");
  }
  if (fft_size < 2) throw std::invalid_argument("filter bank needs fft_size >= 2");

  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = sample_rate_hz / static_cast<double>(fft_size);

  // num_filters + 2 mel-equispaced points; the interior points are the
  // filter centers for both kinds.
  const double mel_lo = mel_scale(f_low_hz);
  const double mel_hi = mel_scale(f_high_hz);
  std::vector<double> grid_hz(static_cast<std::size_t>(num_filters) + 2);
  for (std::size_t i = 0; i < grid_hz.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(num_filters + 1);
    grid_hz[i] = mel_inverse(mel);
  }

  FilterBank bank;
  bank.kind = kind;
  bank.num_filters = num_filters;
  bank.e_factor = e_factor;
  bank.filters.assign(static_cast<std::size_t>(num_filters),
                      std::vector<double>(bins, 0.0));
  bank.center_freqs_hz.resize(static_cast<std::size_t>(num_filters));

  for (int b = 0; b < num_filters; ++b) {
    const double center = grid_hz[static_cast<std::size_t>(b) + 1];
    bank.center_freqs_hz[static_cast<std::size_t>(b)] = center;

    double foot_lo, foot_hi;
    if (kind == FilterBank::Kind::Mel) {
      foot_lo = grid_hz[static_cast<std::size_t>(b)];
      foot_hi = grid_hz[static_cast<std::size_t>(b) + 2];
    } else {
      // Half-width follows the ERB at the center, floored to one bin spacing
      // so narrow filters keep a nonzero peak.
      const double half_width =
          std::max(e_factor * erb_bandwidth(center / 1000.0), bin_hz);
      foot_lo = center - half_width;
      foot_hi = center + half_width;
    }

    auto& row = bank.filters[static_cast<std::size_t>(b)];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      if (f <= foot_lo || f >= foot_hi) continue;
      row[k] = f <= center ? (f - foot_lo) / (center - foot_lo)
                           : (foot_hi - f) / (foot_hi - center);
    }
    if (*std::max_element(row.begin(), row.end()) == 0.0) {
      const std::size_t nearest = static_cast<std::size_t>(
          std::min(std::llround(center / bin_hz),
                   static_cast<long long>(bins - 1)));
      row[nearest] = 1.0;
    }
  }
  return bank;
}

std::vector<double> cepstral_coefficients(const std::vector<double>& psd,
                                          const FilterBank& bank,
                                          int num_coeffs) {
  if (bank.filters.empty() || bank.filters[0].size() != psd.size()) {
    throw std::invalid_argument("PSD bin count does not match filter bank");
  }
  if (num_coeffs < 1 || num_coeffs > bank.num_filters) {
    throw std::invalid_argument("num_coeffs must be in [1, num_filters]");
  }
  const std::size_t nb = bank.filters.size();
  std::vector<double> log_energy(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    const auto& row = bank.filters[b];
    for (std::size_t k = 0; k < psd.size(); ++k) s += row[k] * psd[k];
    log_energy[b] = std::log(s + kLogFloor);
  }

  // Orthonormal DCT-II.
  std::vector<double> coeffs(static_cast<std::size_t>(num_coeffs), 0.0);
  for (int j = 0; j < num_coeffs; ++j) {
    double acc = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      acc += log_energy[b] *
             std::cos(std::numbers::pi * (2.0 * static_cast<double>(b) + 1.0) *
                      static_cast<double>(j) / (2.0 * static_cast<double>(nb)));
    }
    const double scale = j == 0 ? std::sqrt(1.0 / static_cast<double>(nb))
                                : std::sqrt(2.0 / static_cast<double>(nb));
    coeffs[static_cast<std::size_t>(j)] = scale * acc;
  }
  return coeffs;
}

std::vector<double> spectral_envelope(const std::vector<double>& cepstra,
                                      std::size_t num_bins,
                                      double sample_rate_hz) {
  if (num_bins < 1) throw std::invalid_argument("spectral_envelope needs num_bins >= 1");
  std::vector<double> env(num_bins);
  for (std::size_t t = 1; t <= num_bins; ++t) {
    const double f = static_cast<double>(t) * (sample_rate_hz / 2.0) /
                     static_cast<double>(num_bins);
    const double w = 2.0 * std::numbers::pi * f / sample_rate_hz;
    double acc = 0.0;
    for (std::size_t i = 0; i < cepstra.size(); ++i) {
      acc += cepstra[i] * std::cos(static_cast<double>(i + 1) * w);
    }
    env[t - 1] = std::exp(acc);
  }
  return env;
}

FeatureSequence extract_cepstral_features(const Signal& signal,
                                          const CepstralConfig& config) {
  if (config.hop == 0 || config.frame_len <= config.hop) {
    throw std::invalid_argument("frame_len must exceed hop and hop must be positive");
  }
  if (signal.samples.size() < config.frame_len) {
    throw std::invalid_argument("signal shorter than one frame");
  }

  std::vector<double> samples = signal.samples;
  if (config.denoise_levels > 0) {
    const WaveletFilter filter = WaveletFilter::by_name(config.wavelet);
    DwtCoefficients coeffs = dwt1d(signal, filter, config.denoise_levels);
    for (auto& detail : coeffs.details) {
      std::fill(detail.begin(), detail.end(), 0.0);
    }
    samples = idwt1d(coeffs, filter).samples;
  }

  const std::size_t num_frames =
      1 + (samples.size() - config.frame_len) / config.hop;
  const std::vector<double> window = hamming_window(config.frame_len);
  const std::size_t fft_size = next_pow2(config.frame_len);
  const FilterBank bank =
      build_filterbank(config.bank_kind, config.num_filters, 0.0,
                       signal.sample_rate_hz / 2.0, fft_size,
                       signal.sample_rate_hz, config.e_factor);

  FeatureSequence features(num_frames, static_cast<std::size_t>(config.num_coeffs));
  std::vector<double> frame(config.frame_len);
  for (std::size_t m = 0; m < num_frames; ++m) {
    const std::size_t start = m * config.hop;
    for (std::size_t i = 0; i < config.frame_len; ++i) {
      frame[i] = samples[start + i] * window[i];
    }
    const std::vector<double> psd = power_spectrum(frame);
    const std::vector<double> ceps =
        cepstral_coefficients(psd, bank, config.num_coeffs);
    std::copy(ceps.begin(), ceps.end(), features.row(m));
  }
  return features;
}

}  // namespace ptseq
