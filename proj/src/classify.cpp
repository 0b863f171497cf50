#include "ptseq/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace ptseq {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = m(r, c);
  }
  return out;
}

// log N(x; mean, cov) via Cholesky.
double log_density(const std::vector<double>& mean, const Matrix& cov,
                   const std::vector<double>& x) {
  const std::size_t d = mean.size();
  const Eigen::LLT<Eigen::MatrixXd> llt(to_eigen(cov));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("covariance is not positive-definite");
  }
  Eigen::VectorXd diff(d);
  for (std::size_t i = 0; i < d; ++i) diff(i) = x[i] - mean[i];
  const Eigen::VectorXd solved = llt.solve(diff);
  double log_det = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(i)));
  }
  const double quad = diff.dot(solved);
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) +
                 log_det + quad);
}

void check_class_pair(const GaussianClassModel& model, std::size_t a,
                      std::size_t b) {
  if (a >= model.means.size() || b >= model.means.size()) {
    throw std::invalid_argument("class index out of range");
  }
}

Eigen::MatrixXd averaged_covariance(const GaussianClassModel& model,
                                    std::size_t a, std::size_t b) {
  return (to_eigen(model.covariances[a]) + to_eigen(model.covariances[b])) / 2.0;
}

double mean_quadratic(const GaussianClassModel& model, std::size_t a,
                      std::size_t b, const Eigen::MatrixXd& cov) {
  const std::size_t d = model.dim;
  Eigen::VectorXd diff(d);
  for (std::size_t i = 0; i < d; ++i) {
    diff(i) = model.means[a][i] - model.means[b][i];
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("covariance is not positive-definite");
  }
  return diff.dot(llt.solve(diff));
}

}  // namespace

GaussianClassModel bayes_fit(const Matrix& data, const std::vector<int>& labels,
                             double lambda) {
  if (labels.size() != data.rows || data.rows == 0) {
    throw std::invalid_argument("label count does not match data rows");
  }
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("labels must be non-negative");
    max_label = std::max(max_label, l);
  }
  const std::size_t num_classes = static_cast<std::size_t>(max_label) + 1;
  const std::size_t d = data.cols;

  std::vector<std::size_t> counts(num_classes, 0);
  for (int l : labels) counts[static_cast<std::size_t>(l)]++;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] < 2) {
      throw std::invalid_argument("every class needs at least two samples");
    }
  }

  GaussianClassModel model;
  model.dim = d;
  model.lambda = lambda;
  model.means.assign(num_classes, std::vector<double>(d, 0.0));
  model.covariances.assign(num_classes, Matrix(d, d));
  model.priors.assign(num_classes, 1.0 / static_cast<double>(num_classes));

  for (std::size_t r = 0; r < data.rows; ++r) {
    const std::size_t c = static_cast<std::size_t>(labels[r]);
    for (std::size_t i = 0; i < d; ++i) model.means[c][i] += data(r, i);
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (double& v : model.means[c]) v /= static_cast<double>(counts[c]);
  }
  for (std::size_t r = 0; r < data.rows; ++r) {
    const std::size_t c = static_cast<std::size_t>(labels[r]);
    for (std::size_t i = 0; i < d; ++i) {
      const double di = data(r, i) - model.means[c][i];
      for (std::size_t j = 0; j < d; ++j) {
        model.covariances[c](i, j) += di * (data(r, j) - model.means[c][j]);
      }
    }
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (double& v : model.covariances[c].data) {
      v /= static_cast<double>(counts[c] - 1);
    }
    for (std::size_t i = 0; i < d; ++i) model.covariances[c](i, i) += lambda;
  }
  return model;
}

BayesResult bayes_classify(const GaussianClassModel& model,
                           const std::vector<double>& x, ScoreOutput output) {
  if (x.size() != model.dim) {
    throw std::invalid_argument("input dimension does not match model");
  }
  const std::size_t num_classes = model.means.size();
  std::vector<double> log_scores(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    log_scores[c] = log_density(model.means[c], model.covariances[c], x);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < num_classes; ++c) {
    if (log_scores[c] > log_scores[best]) best = c;
  }

  BayesResult result;
  result.label = best;
  result.scores.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    result.scores[c] = output == ScoreOutput::Probability
                           ? std::exp(log_scores[c])
                           : std::exp(log_scores[c] - log_scores[best]);
  }
  return result;
}

int knn_classify(const Matrix& train, const std::vector<int>& labels,
                 const std::vector<double>& x, std::size_t k, Metric metric) {
  if (labels.size() != train.rows) {
    throw std::invalid_argument("label count does not match training rows");
  }
  if (k < 1 || k > train.rows) {
    throw std::invalid_argument("knn needs 1 <= k <= number of training rows");
  }
  if (x.size() != train.cols) {
    throw std::invalid_argument("input dimension does not match training data");
  }

  std::vector<std::pair<double, std::size_t>> ranked(train.rows);
  for (std::size_t r = 0; r < train.rows; ++r) {
    double dist = 0.0;
    for (std::size_t c = 0; c < train.cols; ++c) {
      const double diff = train(r, c) - x[c];
      dist += metric == Metric::Euclidean ? diff * diff : std::abs(diff);
    }
    ranked[r] = {dist, r};
  }
  std::sort(ranked.begin(), ranked.end());  // distance, then row index

  std::map<int, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i) {
    votes[labels[ranked[i].second]]++;
  }
  int best_label = votes.begin()->first;
  std::size_t best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {  // ascending keys keep ties at the lowest label
      best_label = label;
      best_count = count;
    }
  }
  return best_label;
}

double bhattacharyya_distance(const GaussianClassModel& model,
                              std::size_t class_a, std::size_t class_b) {
  check_class_pair(model, class_a, class_b);
  const Eigen::MatrixXd avg = averaged_covariance(model, class_a, class_b);
  const double quad = mean_quadratic(model, class_a, class_b, avg);
  const double det_avg = avg.determinant();
  const double det_a = to_eigen(model.covariances[class_a]).determinant();
  const double det_b = to_eigen(model.covariances[class_b]).determinant();
  return quad / 8.0 + 0.5 * std::log(det_avg / std::sqrt(det_a * det_b));
}

double mahalanobis_distance(const GaussianClassModel& model,
                            std::size_t class_a, std::size_t class_b) {
  check_class_pair(model, class_a, class_b);
  const Eigen::MatrixXd avg = averaged_covariance(model, class_a, class_b);
  return std::sqrt(mean_quadratic(model, class_a, class_b, avg));
}

}  // namespace ptseq
