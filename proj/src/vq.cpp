#include "ptseq/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptseq {

namespace {

double squared_distance(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

std::size_t nearest_centroid(const Matrix& centroids, const double* point) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.rows; ++j) {
    const double dist = squared_distance(centroids.row(j), point, centroids.cols);
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

}  // namespace

Codebook lbg_train(const Matrix& vectors, std::size_t k, double epsilon,
                   int max_iters) {
  const std::size_t n = vectors.rows;
  const std::size_t d = vectors.cols;
  if (k < 1 || k > n) {
    throw std::invalid_argument("lbg_train needs 1 <= k <= number of vectors");
  }
  if (epsilon <= 0.0) throw std::invalid_argument("lbg_train needs epsilon > 0");

  Codebook book;
  book.centroids = Matrix(k, d);

  // Seed from the first k distinct rows; duplicates of the first row fill in
  // if the data has fewer distinct rows, and reseeding resolves them later.
  std::size_t seeded = 0;
  for (std::size_t r = 0; r < n && seeded < k; ++r) {
    bool duplicate = false;
    for (std::size_t j = 0; j < seeded && !duplicate; ++j) {
      duplicate = squared_distance(book.centroids.row(j), vectors.row(r), d) == 0.0;
    }
    if (!duplicate) {
      std::copy(vectors.row(r), vectors.row(r) + d, book.centroids.row(seeded));
      ++seeded;
    }
  }
  for (std::size_t j = seeded; j < k; ++j) {
    std::copy(vectors.row(0), vectors.row(0) + d, book.centroids.row(j));
  }

  std::vector<std::size_t> assignment(n, 0);
  std::vector<double> point_dist(n, 0.0);
  Matrix sums(k, d);
  std::vector<std::size_t> counts(k, 0);

  for (int iter = 0; iter < max_iters; ++iter) {
    double distortion = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      assignment[r] = nearest_centroid(book.centroids, vectors.row(r));
      point_dist[r] =
          squared_distance(book.centroids.row(assignment[r]), vectors.row(r), d);
      distortion += point_dist[r];
    }
    book.distortion_history.push_back(distortion);

    std::fill(sums.data.begin(), sums.data.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t r = 0; r < n; ++r) {
      counts[assignment[r]]++;
      for (std::size_t c = 0; c < d; ++c) sums(assignment[r], c) += vectors(r, c);
    }

    Matrix updated(k, d);
    std::vector<bool> reseed_used(n, false);
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] > 0) {
        for (std::size_t c = 0; c < d; ++c) {
          updated(j, c) = sums(j, c) / static_cast<double>(counts[j]);
        }
      } else {
        // Reseed from the point farthest from its centroid, skipping points
        // already taken by an earlier empty cluster this round.
        std::size_t pick = 0;
        double worst = -1.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (!reseed_used[r] && point_dist[r] > worst) {
            worst = point_dist[r];
            pick = r;
          }
        }
        reseed_used[pick] = true;
        std::copy(vectors.row(pick), vectors.row(pick) + d, updated.row(j));
      }
    }

    double displacement = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      displacement = std::max(
          displacement,
          std::sqrt(squared_distance(book.centroids.row(j), updated.row(j), d)));
    }
    if (displacement < epsilon) break;  // keep the centroids the assignment used
    book.centroids = std::move(updated);
  }
  return book;
}

SymbolSequence quantize(const Codebook& codebook, const FeatureSequence& features) {
  if (features.cols != codebook.centroids.cols) {
    throw std::invalid_argument("feature dimension does not match codebook");
  }
  SymbolSequence symbols(features.rows);
  for (std::size_t r = 0; r < features.rows; ++r) {
    symbols[r] = static_cast<int>(nearest_centroid(codebook.centroids, features.row(r)));
  }
  return symbols;
}

}  // namespace ptseq
