#include "ptseq/features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ptseq/dsp.hpp"

namespace ptseq {

namespace {

constexpr double kPi = std::numbers::pi;

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.data) acc += v * v;
  return std::sqrt(acc);
}

double mean_direction(const Matrix& frame) {
  const GradientField field = gradient_field(frame);
  double acc = 0.0;
  for (double v : field.direction.data) acc += v;
  return acc / static_cast<double>(field.direction.data.size());
}

std::vector<double> normalized_by_max(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp(values[i] / peak, 0.0, 1.0);
  }
  return out;
}

// Bell-shaped oscillating mother wavelet on [0,1] (cubic-spline bandwidth
// profile approximated by a Gaussian).
double mother_wavelet(double u) {
  constexpr double kOrder = 3.0;
  constexpr double kA = 0.697066;
  constexpr double kF0 = 0.409177;
  constexpr double kSigma = 0.561145;
  const double amp = 4.0 * std::pow(kA, kOrder + 1.0) /
                     std::sqrt(2.0 * kPi * (kOrder + 1.0)) * kSigma;
  const double z = 2.0 * u - 1.0;
  return amp * std::cos(2.0 * kPi * kF0 * z) *
         std::exp(-z * z / (2.0 * kSigma * kSigma * (kOrder + 1.0)));
}

}  // namespace

GradientField gradient_field(const Matrix& grid) {
  if (grid.rows < 3 || grid.cols < 3) {
    throw std::invalid_argument("gradient_field needs at least a 3x3 grid");
  }
  GradientField f;
  f.dx = Matrix(grid.rows, grid.cols);
  f.dy = Matrix(grid.rows, grid.cols);
  f.direction = Matrix(grid.rows, grid.cols);
  f.magnitude = Matrix(grid.rows, grid.cols);
  for (std::size_t r = 1; r + 1 < grid.rows; ++r) {
    for (std::size_t c = 1; c + 1 < grid.cols; ++c) {
      const double gx = (grid(r, c + 1) - grid(r, c - 1)) / 2.0;
      const double gy = (grid(r + 1, c) - grid(r - 1, c)) / 2.0;
      f.dx(r, c) = gx;
      f.dy(r, c) = gy;
      f.direction(r, c) = std::atan2(gy, gx);
      f.magnitude(r, c) = std::hypot(gx, gy);
    }
  }
  return f;
}

std::vector<double> orientation_histogram(const Matrix& grid, int bins) {
  if (bins < 2) throw std::invalid_argument("orientation_histogram needs bins >= 2");
  const GradientField field = gradient_field(grid);
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t i = 0; i < field.magnitude.data.size(); ++i) {
    const double mag = field.magnitude.data[i];
    if (mag == 0.0) continue;
    double deg = field.direction.data[i] * 180.0 / kPi;
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    const auto bin = std::min(
        static_cast<std::size_t>(deg / 180.0 * static_cast<double>(bins)),
        static_cast<std::size_t>(bins - 1));
    hist[bin] += mag;
  }
  return hist;
}

SegmentList keyframe_segments(const FrameSequence& frames,
                              const KeyframeConfig& config) {
  if (frames.size() < 2) {
    throw std::invalid_argument("keyframe_segments needs at least two frames");
  }
  const std::size_t t_count = frames.size();
  std::vector<double> stat(t_count);
  for (std::size_t t = 0; t < t_count; ++t) stat[t] = mean_direction(frames[t]);

  std::vector<double> diff(t_count - 1);
  for (std::size_t t = 0; t + 1 < t_count; ++t) {
    diff[t] = std::abs(stat[t + 1] - stat[t]);
  }
  double tol = config.flat_tolerance;
  if (tol < 0.0) {
    tol = 1e-3 * *std::max_element(diff.begin(), diff.end());
  }

  // A run of L flat diffs spans L+1 frames; runs spanning >= min_run frames
  // mark all their frames as boundary.
  std::vector<bool> boundary(t_count, false);
  std::size_t run_start = 0;
  bool in_run = false;
  auto close_run = [&](std::size_t run_end) {  // diffs [run_start, run_end)
    const std::size_t span = run_end - run_start + 1;
    if (span >= config.min_run) {
      for (std::size_t f = run_start; f <= run_end; ++f) boundary[f] = true;
    }
  };
  for (std::size_t t = 0; t < diff.size(); ++t) {
    if (diff[t] <= tol) {
      if (!in_run) {
        in_run = true;
        run_start = t;
      }
    } else if (in_run) {
      in_run = false;
      close_run(t);
    }
  }
  if (in_run) close_run(diff.size());

  SegmentList segments;
  std::size_t seg_start = 0;
  bool in_seg = false;
  for (std::size_t f = 0; f < t_count; ++f) {
    if (!boundary[f]) {
      if (!in_seg) {
        in_seg = true;
        seg_start = f;
      }
    } else if (in_seg) {
      in_seg = false;
      segments.push_back({seg_start, f - 1});
    }
  }
  if (in_seg) segments.push_back({seg_start, t_count - 1});
  return segments;
}

std::vector<std::size_t> select_middle_frames(const Segment& segment,
                                              std::size_t k) {
  std::vector<std::size_t> indices;
  if (k == 0) return indices;
  const std::size_t len = segment.end - segment.start + 1;
  if (len <= k) {
    for (std::size_t i = segment.start; i <= segment.end; ++i) indices.push_back(i);
    return indices;
  }
  const std::size_t offset = (len - k + 1) / 2;
  for (std::size_t i = 0; i < k; ++i) indices.push_back(segment.start + offset + i);
  return indices;
}

std::vector<double> trajectory_speed(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("trajectory_speed needs at least two points");
  }
  std::vector<double> speed(points.size() - 1);
  for (std::size_t t = 0; t + 1 < points.size(); ++t) {
    speed[t] = std::hypot(points[t].first - points[t + 1].first,
                          points[t].second - points[t + 1].second);
  }
  return speed;
}

OrientationEstimate dwt_orientation(const Matrix& grid) {
  if (grid.rows < 8 || grid.cols < 8) {
    throw std::invalid_argument("dwt_orientation needs at least an 8x8 grid");
  }
  const WaveletFilter filter = WaveletFilter::d4();
  const Dwt2d level1 = dwt2d(grid, filter);
  const Dwt2d level2 = dwt2d(level1.ll, filter);
  const double horizontal_energy = frobenius_norm(level2.lh);
  const double vertical_energy = frobenius_norm(level2.hl);
  // Flat grids leave only rounding residue in the detail bands; anything that
  // small relative to the input is direction-free, not a real orientation.
  const double noise_floor = 1e-12 * frobenius_norm(grid);
  if (horizontal_energy <= noise_floor && vertical_energy <= noise_floor) {
    return {0.0, true};
  }
  return {std::atan2(horizontal_energy, vertical_energy), false};
}

Contour make_contour(std::vector<std::pair<double, double>> points) {
  if (points.size() < 8) {
    throw std::invalid_argument("contour needs at least 8 points");
  }
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument("contour points must be finite");
    }
    cx += x;
    cy += y;
  }
  Contour c;
  c.centroid = {cx / static_cast<double>(points.size()),
                cy / static_cast<double>(points.size())};
  c.points = std::move(points);
  return c;
}

std::vector<double> wavelet_descriptor(const Contour& contour, int max_scale,
                                       int num_harmonics) {
  if (contour.points.size() < 8) {
    throw std::invalid_argument("contour needs at least 8 points");
  }
  if (max_scale < 0 || num_harmonics < 1) {
    throw std::invalid_argument("descriptor needs max_scale >= 0 and num_harmonics >= 1");
  }
  const std::size_t n = contour.points.size();

  double area2 = 0.0;
  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [x0, y0] = contour.points[i];
    const auto& [x1, y1] = contour.points[(i + 1) % n];
    area2 += x0 * y1 - x1 * y0;
    extent = std::max({extent, std::abs(x0 - contour.centroid.first),
                       std::abs(y0 - contour.centroid.second)});
  }
  if (std::abs(area2) <= 1e-12 * extent * extent || extent == 0.0) {
    throw std::invalid_argument("contour is degenerate (zero area)");
  }

  std::vector<std::pair<double, double>> pts = contour.points;
  if (area2 < 0.0) std::reverse(pts.begin(), pts.end());

  std::vector<double> theta(n);
  std::vector<double> radius(n);
  double r_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ox = pts[i].first - contour.centroid.first;
    const double oy = pts[i].second - contour.centroid.second;
    theta[i] = std::atan2(oy, ox);
    radius[i] = std::hypot(ox, oy);
    r_max = std::max(r_max, radius[i]);
  }
  for (double& r : radius) r /= r_max;

  // Unwrap the traversal angles into a non-decreasing sequence covering one
  // counter-clockwise turn, closing back at theta[0] + 2*pi.
  const double turn_end = theta[0] + 2.0 * kPi;
  std::vector<double> unwrapped(n + 1);
  std::vector<double> r_path(n + 1);
  unwrapped[0] = theta[0];
  r_path[0] = radius[0];
  for (std::size_t i = 1; i < n; ++i) {
    double d = theta[i] - theta[i - 1];
    while (d <= -kPi) d += 2.0 * kPi;
    while (d > kPi) d -= 2.0 * kPi;
    if (d < 0.0) d = 0.0;  // local backtracks collapse onto one angle
    unwrapped[i] = std::min(unwrapped[i - 1] + d, turn_end);
    r_path[i] = radius[i];
  }
  unwrapped[n] = turn_end;
  r_path[n] = radius[0];

  // Angular resample anchored at the first point, then angular Fourier
  // coefficients accumulated per radial bin.
  constexpr std::size_t kAngular = 256;
  constexpr std::size_t kRadial = 256;
  const std::size_t nb = static_cast<std::size_t>(num_harmonics);
  std::vector<std::vector<std::complex<double>>> f_b(
      nb, std::vector<std::complex<double>>(kRadial, {0.0, 0.0}));
  const double dt = 2.0 * kPi / static_cast<double>(kAngular);
  std::size_t seg = 0;
  for (std::size_t a = 0; a < kAngular; ++a) {
    const double t = theta[0] + dt * static_cast<double>(a);
    while (seg + 1 < n && unwrapped[seg + 1] < t) ++seg;
    const double lo = unwrapped[seg];
    const double hi = unwrapped[seg + 1];
    const double w = hi > lo ? std::clamp((t - lo) / (hi - lo), 0.0, 1.0) : 0.0;
    const double r = r_path[seg] + w * (r_path[seg + 1] - r_path[seg]);
    const std::size_t bin = std::min(
        static_cast<std::size_t>(r * static_cast<double>(kRadial)), kRadial - 1);
    for (std::size_t b = 0; b < nb; ++b) {
      const double phase = static_cast<double>(b) * t;
      f_b[b][bin] += std::complex<double>(std::cos(phase), std::sin(phase)) * dt;
    }
  }

  std::vector<double> features;
  std::vector<double> weight(kRadial);
  for (int m = 0; m <= max_scale; ++m) {
    const double scale = std::pow(2.0, m);
    const double amp = std::sqrt(scale);
    const int n_max = static_cast<int>(std::pow(2.0, m + 1));
    for (int shift = 0; shift <= n_max; ++shift) {
      for (std::size_t j = 0; j < kRadial; ++j) {
        const double r = (static_cast<double>(j) + 0.5) / static_cast<double>(kRadial);
        weight[j] = amp * mother_wavelet(scale * r - 0.5 * shift) * r /
                    static_cast<double>(kRadial);
      }
      for (std::size_t b = 0; b < nb; ++b) {
        std::complex<double> g(0.0, 0.0);
        for (std::size_t j = 0; j < kRadial; ++j) g += f_b[b][j] * weight[j];
        features.push_back(std::abs(g));
      }
    }
  }
  return features;
}

int chain_code(double theta_rad) {
  const long long rounded =
      static_cast<long long>(std::floor(theta_rad / (kPi / 4.0) + 0.5));
  const long long shifted = rounded + (theta_rad < 0.0 ? 8 : 0);
  return static_cast<int>(((8 - shifted) % 8 + 8) % 8);
}

FeatureSequence fuse_normalized_features(const std::vector<double>& speeds,
                                         const std::vector<double>& orientations_rad,
                                         const std::vector<double>& moments) {
  const std::size_t t_count = speeds.size();
  if (t_count == 0 || orientations_rad.size() != t_count ||
      moments.size() != t_count) {
    throw std::invalid_argument("feature sequences must share a nonzero length");
  }
  const std::vector<double> norm_speed = normalized_by_max(speeds);
  const std::vector<double> norm_moment = normalized_by_max(moments);
  FeatureSequence out(t_count, 3);
  for (std::size_t t = 0; t < t_count; ++t) {
    out(t, 0) = static_cast<double>(chain_code(orientations_rad[t])) / 8.0;
    out(t, 1) = norm_moment[t];
    out(t, 2) = norm_speed[t];
  }
  return out;
}

PcaResult pca_reduce(const Matrix& data, std::size_t k) {
  const std::size_t n = data.rows;
  const std::size_t d = data.cols;
  if (n < 2) throw std::invalid_argument("pca_reduce needs at least two rows");
  if (k < 1 || k > d) throw std::invalid_argument("pca_reduce needs 1 <= k <= D");

  Eigen::MatrixXd centered(n, d);
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = data(r, c) - mean[c];
  }

  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }

  PcaResult result;
  result.model.mean = mean;
  result.model.components = Matrix(k, d);
  result.model.eigenvalues.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - i);  // descending
    result.model.eigenvalues[i] = std::max(solver.eigenvalues()(col), 0.0);
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    if (v(peak) < 0.0) v = -v;
    for (std::size_t c = 0; c < d; ++c) result.model.components(i, c) = v(c);
  }

  result.reduced = Matrix(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        acc += result.model.components(i, c) * centered(r, c);
      }
      result.reduced(r, i) = acc;
    }
  }
  return result;
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& reduced) {
  if (reduced.cols != model.components.rows) {
    throw std::invalid_argument("reduced width does not match component count");
  }
  const std::size_t d = model.components.cols;
  Matrix out(reduced.rows, d);
  for (std::size_t r = 0; r < reduced.rows; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double acc = model.mean[c];
      for (std::size_t i = 0; i < reduced.cols; ++i) {
        acc += reduced(r, i) * model.components(i, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace ptseq
