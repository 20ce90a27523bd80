#pragma once

#include <span>
#include <vector>

#include <cpkit/core.hpp>

namespace cpkit {

struct ClassTrainingPoint {
  std::vector<double> features;
  std::size_t label = 0;
};

struct RegressionTrainingPoint {
  std::vector<double> features;
  double y = 0.0;
};

/// Indices of the k nearest points by Euclidean distance, nearest first;
/// equal distances resolve to the lower index.
std::vector<std::size_t> nearest_neighbours(std::span<const std::vector<double>> points,
                                            std::span<const double> query, std::size_t k);

/// Class frequencies among the k nearest training points.
ProbabilityVector knn_class_probs(std::span<const ClassTrainingPoint> train,
                                  std::span<const double> query, std::size_t k,
                                  std::size_t class_count);

/// Empirical quantile of the k nearest targets: order statistic ceil(level * k).
double knn_quantile_predict(std::span<const RegressionTrainingPoint> train,
                            std::span<const double> query, std::size_t k, double level);

/// Several levels from one neighbour search.
std::vector<double> knn_quantiles(std::span<const RegressionTrainingPoint> train,
                                  std::span<const double> query, std::size_t k,
                                  std::span<const double> levels);

}  // namespace cpkit
