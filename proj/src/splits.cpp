#include <cpkit/splits.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <cpkit/error.hpp>
#include <cpkit/rng.hpp>

namespace cpkit {

std::vector<std::size_t> SplitAssignment::members(std::size_t part) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i] == part) out.push_back(i);
  }
  return out;
}

namespace {

void check_proportions(std::span<const double> proportions) {
  if (proportions.empty()) throw Error(ErrorCode::BadProportions, "no proportions given");
  double total = 0.0;
  for (const double p : proportions) {
    if (!(p > 0.0)) throw Error(ErrorCode::BadProportions, "proportions must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "proportions sum to " << total << ", expected 1";
    throw Error(ErrorCode::BadProportions, msg.str());
  }
}

}  // namespace

std::vector<std::size_t> largest_remainder_sizes(std::size_t n,
                                                 std::span<const double> proportions) {
  check_proportions(proportions);
  std::vector<std::size_t> sizes(proportions.size());
  std::vector<double> remainders(proportions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    double quota = proportions[i] * static_cast<double>(n);
    const double nearest = std::round(quota);
    if (std::abs(quota - nearest) <= 1e-9) quota = nearest;
    sizes[i] = static_cast<std::size_t>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += sizes[i];
  }
  std::vector<std::size_t> order(proportions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++sizes[order[i % order.size()]];
  }
  return sizes;
}

std::string partition_name(std::size_t partition_count, std::size_t index) {
  if (partition_count == 3) {
    static const char* names[] = {"train", "calibration", "test"};
    return names[index];
  }
  if (partition_count == 2) return index == 0 ? "calibration" : "test";
  return "part_" + std::to_string(index);
}

SplitAssignment random_split(std::size_t n, std::span<const double> proportions,
                             std::uint64_t seed) {
  SplitAssignment out;
  out.sizes = largest_remainder_sizes(n, proportions);
  out.proportions.assign(proportions.begin(), proportions.end());
  out.seed = seed;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  shuffle(std::span(order), rng);

  out.partition.resize(n);
  std::size_t cursor = 0;
  for (std::size_t part = 0; part < out.sizes.size(); ++part) {
    for (std::size_t j = 0; j < out.sizes[part]; ++j) out.partition[order[cursor++]] = part;
  }
  return out;
}

SplitAssignment grouped_split(std::span<const std::string> groups,
                              std::span<const double> proportions, std::uint64_t seed) {
  check_proportions(proportions);

  std::vector<std::string> distinct;
  std::map<std::string, std::size_t> group_size;
  for (const auto& g : groups) {
    if (group_size[g]++ == 0) distinct.push_back(g);
  }
  if (distinct.size() < proportions.size()) {
    std::ostringstream msg;
    msg << distinct.size() << " distinct groups for " << proportions.size() << " partitions";
    throw Error(ErrorCode::TooFewGroups, msg.str());
  }

  // Random order among groups, then largest groups first so the greedy
  // deficit rule can still fill the small partitions.
  SplitMix64 rng(seed);
  shuffle(std::span(distinct), rng);
  std::stable_sort(distinct.begin(), distinct.end(), [&](const auto& a, const auto& b) {
    return group_size[a] > group_size[b];
  });

  const auto total = static_cast<double>(groups.size());
  std::vector<double> assigned(proportions.size(), 0.0);
  std::map<std::string, std::size_t> group_partition;
  for (const auto& g : distinct) {
    std::size_t best = 0;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < proportions.size(); ++p) {
      const double deficit = proportions[p] * total - assigned[p];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = p;
      }
    }
    group_partition[g] = best;
    assigned[best] += static_cast<double>(group_size[g]);
  }

  SplitAssignment out;
  out.proportions.assign(proportions.begin(), proportions.end());
  out.seed = seed;
  out.sizes.assign(proportions.size(), 0);
  out.partition.resize(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out.partition[i] = group_partition[groups[i]];
    ++out.sizes[out.partition[i]];
  }
  return out;
}

namespace {

double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

std::size_t nearest_centroid(const Point2& p, const std::vector<Point2>& centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

void recompute_centroids(std::span<const Point2> coords, const std::vector<std::size_t>& label,
                         std::vector<Point2>& centroids) {
  std::vector<Point2> sums(centroids.size(), Point2{0.0, 0.0});
  std::vector<std::size_t> counts(centroids.size(), 0);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    sums[label[i]][0] += coords[i][0];
    sums[label[i]][1] += coords[i][1];
    ++counts[label[i]];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (counts[c] == 0) continue;  // empty cluster keeps its previous centre
    const auto n = static_cast<double>(counts[c]);
    centroids[c] = Point2{sums[c][0] / n, sums[c][1] / n};
  }
}

// One sweep of Hartigan single-point transfers. Moves a point when doing so
// strictly lowers the within-cluster sum of squares; returns whether any
// point moved. Lloyd iterations alone can stall in poor local optima (for
// instance a 3/1 split of the unit square's corners).
bool hartigan_pass(std::span<const Point2> coords, std::vector<std::size_t>& label,
                   std::vector<Point2>& centroids) {
  std::vector<std::size_t> counts(centroids.size(), 0);
  for (auto l : label) ++counts[l];
  bool moved = false;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto from = label[i];
    if (counts[from] <= 1) continue;
    const double n_from = static_cast<double>(counts[from]);
    const double removal_gain =
        n_from / (n_from - 1.0) * squared_distance(coords[i], centroids[from]);
    std::size_t best = from;
    double best_gain = 0.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (c == from) continue;
      const double n_to = static_cast<double>(counts[c]);
      const double cost = n_to / (n_to + 1.0) * squared_distance(coords[i], centroids[c]);
      const double gain = removal_gain - cost;
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == from) continue;
    const double n_to = static_cast<double>(counts[best]);
    auto& cf = centroids[from];
    auto& ct = centroids[best];
    for (int j = 0; j < 2; ++j) {
      cf[j] = (cf[j] * n_from - coords[i][j]) / (n_from - 1.0);
      ct[j] = (ct[j] * n_to + coords[i][j]) / (n_to + 1.0);
    }
    --counts[from];
    ++counts[best];
    label[i] = best;
    moved = true;
  }
  return moved;
}

}  // namespace

SplitAssignment spatial_cluster_folds(std::span<const Point2> coords, std::size_t k,
                                      std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "at least two folds are required");
  std::set<Point2> unique(coords.begin(), coords.end());
  if (unique.size() == 1 && !coords.empty()) {
    throw Error(ErrorCode::DegenerateCoordinates, "all coordinates are identical");
  }
  if (unique.size() < k) {
    std::ostringstream msg;
    msg << unique.size() << " distinct points for " << k << " folds";
    throw Error(ErrorCode::TooFewPoints, msg.str());
  }

  // Seeded initialisation: first k distinct points of a shuffled order.
  std::vector<std::size_t> order(coords.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  shuffle(std::span(order), rng);
  std::vector<Point2> centroids;
  std::set<Point2> chosen;
  for (const auto i : order) {
    if (chosen.insert(coords[i]).second) centroids.push_back(coords[i]);
    if (centroids.size() == k) break;
  }

  constexpr int kMaxIterations = 100;
  std::vector<std::size_t> label(coords.size(), k);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const auto c = nearest_centroid(coords[i], centroids);
      if (c != label[i]) {
        label[i] = c;
        changed = true;
      }
    }
    recompute_centroids(coords, label, centroids);
    if (!changed && !hartigan_pass(coords, label, centroids)) break;
  }

  // Canonical fold numbering: order of first appearance.
  std::vector<std::size_t> remap(k, k);
  std::size_t next = 0;
  for (auto& l : label) {
    if (remap[l] == k) remap[l] = next++;
    l = remap[l];
  }

  SplitAssignment out;
  out.seed = seed;
  out.sizes.assign(next, 0);
  for (const auto l : label) ++out.sizes[l];
  out.partition = std::move(label);
  return out;
}

}  // namespace cpkit
