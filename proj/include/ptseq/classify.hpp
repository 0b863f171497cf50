#pragma once

#include <cstddef>
#include <vector>

#include "ptseq/matrix.hpp"

namespace ptseq {

enum class ScoreOutput {
  Probability,  // class-conditional Gaussian densities
  Possibility,  // densities divided by their max; the top class scores 1
};

enum class Metric { Euclidean, Manhattan };

struct GaussianClassModel {
  std::size_t dim = 0;                      // D
  std::vector<std::vector<double>> means;   // C rows of length D
  std::vector<Matrix> covariances;          // C matrices, D x D, lambda*I added
  std::vector<double> priors;               // uniform 1/C
  double lambda = 1e-6;
};

// Per-class sample mean and unbiased covariance plus lambda*I. Labels are
// class indices 0..C-1; every class in that range needs >= 2 samples.
GaussianClassModel bayes_fit(const Matrix& data, const std::vector<int>& labels,
                             double lambda = 1e-6);

struct BayesResult {
  std::vector<double> scores;  // per class
  std::size_t label = 0;       // argmax (lowest index on ties)
};

// Densities are evaluated in log space and exponentiated at the end;
// possibility mode exponentiates differences from the best class, so its
// top score is exactly 1 and the argmax matches probability mode always.
BayesResult bayes_classify(const GaussianClassModel& model,
                           const std::vector<double>& x, ScoreOutput output);

// Majority label among the k nearest training rows. Distance ties keep the
// lower row index; vote ties pick the lowest label.
int knn_classify(const Matrix& train, const std::vector<int>& labels,
                 const std::vector<double>& x, std::size_t k,
                 Metric metric = Metric::Euclidean);

// Closed-form distances between two fitted classes, using the averaged
// covariance (S1+S2)/2.
double bhattacharyya_distance(const GaussianClassModel& model,
                              std::size_t class_a, std::size_t class_b);
double mahalanobis_distance(const GaussianClassModel& model,
                            std::size_t class_a, std::size_t class_b);

}  // namespace ptseq
