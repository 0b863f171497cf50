#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ptseq/matrix.hpp"

namespace ptseq {

// Central-difference gradients of a 2-D grid. x runs along columns, y along
// rows; direction = atan2(dy, dx) in radians. Border pixels carry zero
// gradient.
struct GradientField {
  Matrix dx;
  Matrix dy;
  Matrix direction;
  Matrix magnitude;
};

GradientField gradient_field(const Matrix& grid);

// Histogram of gradient orientations folded into [0, 180) degrees, each
// interior pixel contributing its gradient magnitude. Zero-magnitude pixels
// are excluded, so the total mass equals the sum of interior magnitudes.
std::vector<double> orientation_histogram(const Matrix& grid, int bins);

// Inclusive frame-index interval.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
};

using SegmentList = std::vector<Segment>;

struct KeyframeConfig {
  // Differences at or below this count as flat; negative selects the
  // automatic choice 1e-3 x (largest observed frame-to-frame difference).
  double flat_tolerance = -1.0;
  // A flat stretch must span at least this many frames to mark a boundary.
  std::size_t min_run = 3;
};

// Splits a frame sequence at plateaus of the per-frame mean gradient
// direction: a run of near-identical statistics spanning >= min_run frames
// is a boundary, and the segments are the maximal stretches between
// boundaries.
SegmentList keyframe_segments(const FrameSequence& frames,
                              const KeyframeConfig& config = {});

// The k indices centered in the inclusive segment; the whole segment if it
// is shorter than k.
std::vector<std::size_t> select_middle_frames(const Segment& segment,
                                              std::size_t k);

// Euclidean step lengths between consecutive points; output has size
// points-1.
std::vector<double> trajectory_speed(
    const std::vector<std::pair<double, double>>& points);

struct OrientationEstimate {
  double angle_rad = 0.0;  // in [0, pi/2]
  bool degenerate = false;
};

// Dominant stroke angle from the energy ratio of the two second-level
// mixed detail subbands. Horizontal stripes give pi/2, vertical stripes 0;
// equal energies give pi/4. Both energies zero sets the degenerate flag.
OrientationEstimate dwt_orientation(const Matrix& grid);

// Closed contour with precomputed centroid (vertex mean).
struct Contour {
  std::vector<std::pair<double, double>> points;
  std::pair<double, double> centroid{0.0, 0.0};
};

// Validates (>= 8 points, finite) and fills in the centroid.
Contour make_contour(std::vector<std::pair<double, double>> points);

// Rotation-invariant contour moments: the radial profile r(theta) about the
// centroid (r normalized to max 1) is expanded in angular harmonics b and
// projected onto a dilated/shifted wavelet family indexed by (m, n). The
// output holds |G_{m,n,b}| ordered by m in [0, max_scale], then
// n in [0, 2^(m+1)] inclusive, then b in [0, num_harmonics).
std::vector<double> wavelet_descriptor(const Contour& contour, int max_scale,
                                       int num_harmonics);

// 8-connectivity chain code of a displacement direction (radians from
// atan2): 0 = east, counting clockwise. Result in [0, 8).
int chain_code(double theta_rad);

// Combines per-step speed, orientation, and moment sequences into rows of
// (x, y, s) = (orientation, moment, speed), each column normalized into
// [0, 1]: orientation via chain code / 8, the others by their sequence
// maxima (an all-zero column stays zero).
FeatureSequence fuse_normalized_features(const std::vector<double>& speeds,
                                         const std::vector<double>& orientations_rad,
                                         const std::vector<double>& moments);

struct PcaModel {
  std::vector<double> mean;       // length D
  Matrix components;              // k x D, orthonormal rows
  std::vector<double> eigenvalues;  // length k, descending
};

struct PcaResult {
  PcaModel model;
  Matrix reduced;  // N x k
};

// Mean-centered covariance (normalized by N-1), top-k eigenpairs in
// descending order, rows projected onto the components. The sign of each
// component is fixed by making its largest-magnitude entry positive.
PcaResult pca_reduce(const Matrix& data, std::size_t k);

// Maps reduced rows back to the original space: mean + reduced * components.
Matrix pca_reconstruct(const PcaModel& model, const Matrix& reduced);

}  // namespace ptseq
