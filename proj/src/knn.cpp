#include <cpkit/knn.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace cpkit {

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (k > n) {
    std::ostringstream msg;
    msg << "k = " << k << " exceeds " << n << " training points";
    throw Error(ErrorCode::KTooLarge, msg.str());
  }
}

template <typename Point>
std::vector<std::size_t> neighbours_of(std::span<const Point> points,
                                       std::span<const double> query, std::size_t k,
                                       auto&& features_of) {
  check_k(k, points.size());
  std::vector<std::pair<double, std::size_t>> dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& f = features_of(points[i]);
    if (f.size() != query.size()) {
      throw Error(ErrorCode::InvalidArgument, "query dimension differs from training data");
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double d = f[j] - query[j];
      sq += d * d;
    }
    dist[i] = {sq, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

double order_statistic(std::span<const double> sorted_values, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "quantile level must lie in (0,1)");
  }
  const auto k = static_cast<double>(sorted_values.size());
  double position = level * k;
  const double nearest = std::round(position);
  if (std::abs(position - nearest) <= 1e-9) position = nearest;
  auto index = static_cast<std::size_t>(std::ceil(position));
  index = std::clamp<std::size_t>(index, 1, sorted_values.size());
  return sorted_values[index - 1];
}

}  // namespace

std::vector<std::size_t> nearest_neighbours(std::span<const std::vector<double>> points,
                                            std::span<const double> query, std::size_t k) {
  return neighbours_of(points, query, k, [](const auto& p) -> const auto& { return p; });
}

ProbabilityVector knn_class_probs(std::span<const ClassTrainingPoint> train,
                                  std::span<const double> query, std::size_t k,
                                  std::size_t class_count) {
  const auto idx =
      neighbours_of(train, query, k, [](const auto& p) -> const auto& { return p.features; });
  std::vector<std::size_t> counts(class_count, 0);
  for (const auto i : idx) {
    if (train[i].label >= class_count) {
      throw Error(ErrorCode::OutOfRange, "training label outside class range");
    }
    ++counts[train[i].label];
  }
  std::vector<double> probs(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    probs[c] = static_cast<double>(counts[c]) / static_cast<double>(k);
  }
  return validate_probability_vector(std::move(probs), 1e-9);
}

std::vector<double> knn_quantiles(std::span<const RegressionTrainingPoint> train,
                                  std::span<const double> query, std::size_t k,
                                  std::span<const double> levels) {
  const auto idx =
      neighbours_of(train, query, k, [](const auto& p) -> const auto& { return p.features; });
  std::vector<double> ys(k);
  for (std::size_t i = 0; i < k; ++i) ys[i] = train[idx[i]].y;
  std::sort(ys.begin(), ys.end());
  std::vector<double> out;
  out.reserve(levels.size());
  for (const double level : levels) out.push_back(order_statistic(ys, level));
  return out;
}

double knn_quantile_predict(std::span<const RegressionTrainingPoint> train,
                            std::span<const double> query, std::size_t k, double level) {
  const double levels[] = {level};
  return knn_quantiles(train, query, k, levels).front();
}

}  // namespace cpkit
