#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ptseq/matrix.hpp"

namespace ptseq {

struct Signal {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
};

// Orthonormal Daubechies analysis filter pair. Both sequences have equal
// length, unit energy, and are mutually orthogonal.
struct WaveletFilter {
  std::vector<double> low_pass;
  std::vector<double> high_pass;
  std::string name;

  static WaveletFilter d4();
  static WaveletFilter d6();
  static WaveletFilter by_name(const std::string& name);
};

// Multi-level 1-D decomposition. details holds one sequence per level,
// finest (first decomposition step) last.
struct DwtCoefficients {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
  int levels = 0;
  std::size_t original_length = 0;
  double sample_rate_hz = 0.0;
};

// Single-level 2-D decomposition quadrants. The first letter names the filter
// applied along rows (horizontal direction), the second the filter applied
// along columns: lh is low-pass horizontal / high-pass vertical, so purely
// horizontal stripes land in lh.
struct Dwt2d {
  Matrix ll, lh, hl, hh;
};

struct FilterBank {
  enum class Kind { Mel, Hfcc };

  Kind kind = Kind::Mel;
  std::vector<std::vector<double>> filters;  // one row of weights per filter, over FFT bins [0, fft_size/2]
  std::vector<double> center_freqs_hz;
  int num_filters = 0;
  double e_factor = 1.0;
};

// Convolve-and-downsample analysis with periodic boundary extension.
// Odd working lengths are edge-replicated to even before each level.
DwtCoefficients dwt1d(const Signal& signal, const WaveletFilter& filter, int levels);

// Inverse transform; reconstructs to original_length.
Signal idwt1d(const DwtCoefficients& coeffs, const WaveletFilter& filter);

// Row-wise then column-wise single-level decomposition; odd dimensions are
// edge-replicated to even first.
Dwt2d dwt2d(const Matrix& grid, const WaveletFilter& filter);

// w[k] = 0.54 - 0.46 cos(2 pi k / (n - 1)).
std::vector<double> hamming_window(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

// Periodogram PSD: |FFT(frame)|^2 / N for bins [0, N/2], where N is the
// frame length zero-padded to the next power of two.
std::vector<double> power_spectrum(const std::vector<double>& frame);

// 2595 log10(1 + f / 700).
double mel_scale(double f_hz);
double mel_inverse(double mel);

// 6.23 fc^2 + 93.39 fc + 28.52 with fc in kHz; result in Hz.
double erb_bandwidth(double fc_khz);

// Triangular filter bank over FFT bins. Centers are equally spaced on the
// mel scale for both kinds. Mel triangles have their feet at the adjacent
// centers; Hfcc triangles are symmetric in Hz with half-width
// e_factor * erb_bandwidth(center), independent of the filter count.
FilterBank build_filterbank(FilterBank::Kind kind, int num_filters,
                            double f_low_hz, double f_high_hz,
                            std::size_t fft_size, double sample_rate_hz,
                            double e_factor = 1.0);

// Filter energies S(b) = sum_k H(k, b) P(k), then the first num_coeffs
// orthonormal DCT-II values of log(S(b) + 1e-10).
std::vector<double> cepstral_coefficients(const std::vector<double>& psd,
                                          const FilterBank& bank,
                                          int num_coeffs);

// exp(sum_i me_i cos(i w_t)) at num_bins equally spaced frequencies up to
// Nyquist; cepstra[k] multiplies cos((k + 1) w_t).
std::vector<double> spectral_envelope(const std::vector<double>& cepstra,
                                      std::size_t num_bins,
                                      double sample_rate_hz);

struct CepstralConfig {
  int denoise_levels = 3;
  std::string wavelet = "D6";
  std::size_t frame_len = 256;
  std::size_t hop = 128;
  FilterBank::Kind bank_kind = FilterBank::Kind::Hfcc;
  int num_filters = 29;
  int num_coeffs = 12;
  double e_factor = 1.0;
};

// Full front end: optional wavelet denoising (rebuild from approximation
// coefficients with details zeroed), then frame -> window -> PSD -> cepstra.
// Rows are frames, columns the num_coeffs cepstral values.
FeatureSequence extract_cepstral_features(const Signal& signal,
                                          const CepstralConfig& config);

}  // namespace ptseq
