#pragma once

#include <cstddef>
#include <vector>

namespace ptseq {

// Dense row-major matrix of doubles. Also serves as FeatureSequence
// (one feature row per time step) throughout the library.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

using FeatureSequence = Matrix;
using SymbolSequence = std::vector<int>;
using FrameSequence = std::vector<Matrix>;

}  // namespace ptseq
