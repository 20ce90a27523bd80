#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cpkit {

/// Partition (or fold) index per instance. For proportion-driven splits,
/// `proportions` holds the requested shares and `sizes` the realised counts.
struct SplitAssignment {
  std::vector<std::size_t> partition;
  std::vector<std::size_t> sizes;
  std::vector<double> proportions;
  std::uint64_t seed = 0;

  std::size_t partition_count() const noexcept { return sizes.size(); }
  std::vector<std::size_t> members(std::size_t part) const;
};

using Point2 = std::array<double, 2>;

/// Largest-remainder apportionment of n over proportions; ties in the
/// fractional parts go to the lower index.
std::vector<std::size_t> largest_remainder_sizes(std::size_t n,
                                                 std::span<const double> proportions);

/// "train"/"calibration"/"test" for three partitions, "calibration"/"test"
/// for two, otherwise "part_<i>".
std::string partition_name(std::size_t partition_count, std::size_t index);

SplitAssignment random_split(std::size_t n, std::span<const double> proportions,
                             std::uint64_t seed);

/// Keeps every group within a single partition.
SplitAssignment grouped_split(std::span<const std::string> groups,
                              std::span<const double> proportions, std::uint64_t seed);

/// k-means folds over 2-d coordinates.
SplitAssignment spatial_cluster_folds(std::span<const Point2> coords, std::size_t k,
                                      std::uint64_t seed);

}  // namespace cpkit
