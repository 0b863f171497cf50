#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ptseq/matrix.hpp"
#include "ptseq/vq.hpp"

using ptseq::Codebook;
using ptseq::Matrix;

namespace {

Matrix column_matrix(const std::vector<double>& values) {
  Matrix m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(i, 0) = values[i];
  return m;
}

// Squared Euclidean distance between a data row and a centroid row.
double sq_dist(const Matrix& a, std::size_t ra, const Matrix& b, std::size_t rb) {
  double acc = 0.0;
  for (std::size_t c = 0; c < a.cols; ++c) {
    const double diff = a(ra, c) - b(rb, c);
    acc += diff * diff;
  }
  return acc;
}

// Total squared error of an assignment against the given centroids.
double assignment_sse(const Matrix& points, const Matrix& centroids,
                      const std::vector<int>& assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < points.rows; ++r) {
    total += sq_dist(points, r, centroids, std::size_t(assignment[r]));
  }
  return total;
}

// Squared error of a partition measured against its own cluster means.
double partition_sse(const Matrix& points, const std::vector<int>& assignment,
                     std::size_t k) {
  Matrix means(k, points.cols);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t r = 0; r < points.rows; ++r) {
    counts[assignment[r]]++;
    for (std::size_t c = 0; c < points.cols; ++c) {
      means(assignment[r], c) += points(r, c);
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0) continue;
    for (std::size_t c = 0; c < points.cols; ++c) {
      means(j, c) /= double(counts[j]);
    }
  }
  double total = 0.0;
  for (std::size_t r = 0; r < points.rows; ++r) {
    total += sq_dist(points, r, means, std::size_t(assignment[r]));
  }
  return total;
}

}  // namespace

TEST_CASE("lbg on four 1-d points splits into the obvious pairs") {
  Matrix points = column_matrix({0.0, 0.1, 1.0, 1.1});
  Codebook book = ptseq::lbg_train(points, 2);

  REQUIRE(book.centroids.rows == 2);
  REQUIRE(book.centroids.cols == 1);
  std::vector<double> got{book.centroids(0, 0), book.centroids(1, 0)};
  std::sort(got.begin(), got.end());
  CHECK(std::abs(got[0] - 0.05) < 1e-9);
  CHECK(std::abs(got[1] - 1.05) < 1e-9);

  // The converged split matches the exhaustive two-partition optimum.
  std::vector<int> assignment = ptseq::quantize(book, points);
  double oracle = oracles::best_two_partition_sse(points);
  CHECK(std::abs(partition_sse(points, assignment, 2) - oracle) < 1e-12);
  CHECK(std::abs(book.distortion_history.back() - oracle) < 1e-9);
}

TEST_CASE("single-cluster codebook is the global mean") {
  Matrix points = column_matrix({0.0, 0.1, 1.0, 1.1});
  Codebook book = ptseq::lbg_train(points, 1);
  REQUIRE(book.centroids.rows == 1);
  CHECK(book.centroids(0, 0) == (0.0 + 0.1 + 1.0 + 1.1) / 4.0);

  Matrix wide(3, 2);
  wide(0, 0) = 1.0; wide(0, 1) = -2.0;
  wide(1, 0) = 4.0; wide(1, 1) = 0.5;
  wide(2, 0) = -5.0; wide(2, 1) = 7.0;
  Codebook wide_book = ptseq::lbg_train(wide, 1);
  CHECK(wide_book.centroids(0, 0) == (1.0 + 4.0 + -5.0) / 3.0);
  CHECK(wide_book.centroids(0, 1) == (-2.0 + 0.5 + 7.0) / 3.0);
}

TEST_CASE("identical points collapse to zero distortion at any k") {
  Matrix points(5, 2);
  for (std::size_t r = 0; r < 5; ++r) {
    points(r, 0) = 3.25;
    points(r, 1) = -1.5;
  }
  for (std::size_t k : {std::size_t(1), std::size_t(2), std::size_t(4)}) {
    Codebook book = ptseq::lbg_train(points, k);
    REQUIRE(!book.distortion_history.empty());
    CHECK(book.distortion_history.back() == 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(book.centroids(j, 0) == 3.25);
      CHECK(book.centroids(j, 1) == -1.5);
    }
  }
}

TEST_CASE("two interleaved blobs are recovered exactly") {
  // Alternating rows keep one seed in each blob under first-distinct seeding.
  oracles::UnitRng rng(97);
  const std::size_t n = 12;
  Matrix points(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    const bool left = (r % 2 == 0);
    points(r, 0) = (left ? -2.0 : 3.0) + (rng() - 0.5);
    points(r, 1) = (left ? -1.0 : 2.0) + (rng() - 0.5);
  }
  Codebook book = ptseq::lbg_train(points, 2, 1e-10);
  std::vector<int> assignment = ptseq::quantize(book, points);
  double best = oracles::best_two_partition_sse(points);
  CHECK(std::abs(partition_sse(points, assignment, 2) - best) < 1e-9);
  // Both clusters in use, split down the alternation.
  for (std::size_t r = 2; r < n; ++r) CHECK(assignment[r] == assignment[r % 2]);
  CHECK(assignment[0] != assignment[1]);
}

TEST_CASE("distortion history never increases") {
  oracles::UnitRng rng(511);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 40, d = 3;
    Matrix points(n, d);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) points(r, c) = 10.0 * rng();
    }
    const std::size_t k = std::size_t(rng.uniform_int(1, 6));
    Codebook book = ptseq::lbg_train(points, k);
    REQUIRE(!book.distortion_history.empty());
    for (std::size_t i = 1; i < book.distortion_history.size(); ++i) {
      CHECK(book.distortion_history[i] <= book.distortion_history[i - 1]);
    }
  }
}

TEST_CASE("converged centroids are the means of their own assignment") {
  oracles::UnitRng rng(1234);
  const std::size_t n = 60, d = 2, k = 3;
  Matrix points(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) points(r, c) = rng();
  }
  Codebook book = ptseq::lbg_train(points, k, 1e-9, 200);
  std::vector<int> assignment = ptseq::quantize(book, points);

  Matrix means(k, d);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t r = 0; r < n; ++r) {
    counts[assignment[r]]++;
    for (std::size_t c = 0; c < d; ++c) means(assignment[r], c) += points(r, c);
  }
  for (std::size_t j = 0; j < k; ++j) {
    REQUIRE(counts[j] > 0);
    for (std::size_t c = 0; c < d; ++c) {
      CHECK(std::abs(book.centroids(j, c) - means(j, c) / double(counts[j])) < 1e-9);
    }
  }

  // Re-quantizing the training set reproduces the final training assignment:
  // its squared error against the returned centroids is the last recorded one.
  CHECK(assignment_sse(points, book.centroids, assignment) ==
        doctest::Approx(book.distortion_history.back()).epsilon(1e-12));
}

TEST_CASE("quantize maps rows to nearest centroids") {
  Codebook book;
  book.centroids = Matrix(3, 2);
  book.centroids(0, 0) = 0.0; book.centroids(0, 1) = 0.0;
  book.centroids(1, 0) = 1.0; book.centroids(1, 1) = 0.0;
  book.centroids(2, 0) = 5.0; book.centroids(2, 1) = 5.0;

  Matrix features(4, 2);
  features(0, 0) = 5.0; features(0, 1) = 5.0;    // exactly centroid 2
  features(1, 0) = 0.5; features(1, 1) = 0.0;    // tie between 0 and 1
  features(2, 0) = 0.9; features(2, 1) = 0.1;
  features(3, 0) = 100.0; features(3, 1) = 100.0;

  std::vector<int> symbols = ptseq::quantize(book, features);
  REQUIRE(symbols.size() == features.rows);
  CHECK(symbols[0] == 2);
  CHECK(symbols[1] == 0);  // equidistant resolves to the lowest index
  CHECK(symbols[2] == 1);
  CHECK(symbols[3] == 2);
}

TEST_CASE("vq rejects bad arguments") {
  Matrix points = column_matrix({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(ptseq::lbg_train(points, 0), std::invalid_argument);
  CHECK_THROWS_AS(ptseq::lbg_train(points, 4), std::invalid_argument);
  CHECK_THROWS_AS(ptseq::lbg_train(points, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ptseq::lbg_train(points, 2, -1e-3), std::invalid_argument);

  Codebook book = ptseq::lbg_train(points, 2);
  Matrix wrong_dim(2, 3);
  CHECK_THROWS_AS(ptseq::quantize(book, wrong_dim), std::invalid_argument);
}
