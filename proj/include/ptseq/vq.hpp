#pragma once

#include <cstddef>
#include <vector>

#include "ptseq/matrix.hpp"

namespace ptseq {

struct Codebook {
  Matrix centroids;                        // K x D
  std::vector<double> distortion_history;  // total squared error, non-increasing
};

// Alternates nearest-centroid assignment and centroid-mean updates, seeded
// from the first k distinct rows, until the largest centroid displacement
// drops below epsilon or max_iters passes. Clusters that empty out are
// reseeded from the point farthest from its centroid. Returned centroids are
// the ones the final assignment was computed against, so re-quantizing the
// training set reproduces that assignment.
Codebook lbg_train(const Matrix& vectors, std::size_t k, double epsilon = 1e-6,
                   int max_iters = 100);

// Index of the nearest centroid per row (ties to the lowest index).
SymbolSequence quantize(const Codebook& codebook, const FeatureSequence& features);

}  // namespace ptseq
