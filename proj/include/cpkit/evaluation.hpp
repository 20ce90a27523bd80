#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <cpkit/calibration.hpp>
#include <cpkit/prediction.hpp>

namespace cpkit {

inline constexpr const char* kStandardErrorMethod =
    "group-mean standard error: sample stddev of per-group means / sqrt(groups)";

struct CoverageReport {
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t n = 0;
  std::optional<double> standard_error;
  std::optional<std::size_t> group_count;
  std::map<std::string, double> per_group;
};

struct EfficiencyReport {
  std::optional<double> mean_set_size;
  std::optional<double> mean_interval_width;
  std::optional<double> empty_set_fraction;
  std::optional<double> full_set_fraction;
  std::optional<double> standard_error;
  std::size_t n = 0;
};

struct GroupedMean {
  double mean = 0.0;
  double standard_error = 0.0;
  std::map<std::string, double> per_group;
};

struct ThresholdRow {
  double confidence = 0.0;
  double q_hat = kInf;
  double p_threshold = -kInf;

  friend bool operator==(const ThresholdRow&, const ThresholdRow&) = default;
};

/// Rows sorted by descending confidence.
struct ThresholdTable {
  std::vector<ThresholdRow> rows;
  std::int64_t n_cal = 0;
};

CoverageReport empirical_coverage_sets(std::span<const PredictionSet> sets,
                                       std::span<const std::size_t> labels);
/// Adds the grouped standard error when at least two distinct groups exist.
CoverageReport empirical_coverage_sets(std::span<const PredictionSet> sets,
                                       std::span<const std::size_t> labels,
                                       std::span<const std::string> groups);

CoverageReport empirical_coverage_intervals(std::span<const PredictionInterval> intervals,
                                            std::span<const double> ys);
CoverageReport empirical_coverage_intervals(std::span<const PredictionInterval> intervals,
                                            std::span<const double> ys,
                                            std::span<const std::string> groups);

/// Set-size statistics; empty/full fractions need class_count for "full".
EfficiencyReport efficiency_report(std::span<const PredictionSet> sets,
                                   std::optional<std::size_t> class_count = std::nullopt);
EfficiencyReport efficiency_report(std::span<const PredictionInterval> intervals);

/// Grand mean of the values plus the standard error of the per-group means
/// (sample stddev with G-1 denominator, divided by sqrt(G)).
GroupedMean grouped_standard_error(std::span<const double> values,
                                   std::span<const std::string> groups);

/// Coverage restricted to each true class; classes without instances are omitted.
std::map<std::size_t, CoverageReport> per_class_coverage(std::span<const PredictionSet> sets,
                                                         std::span<const std::size_t> labels,
                                                         std::size_t class_count);

/// One LAC calibration per confidence level over a single scoring pass.
ThresholdTable sweep_thresholds(std::span<const LabeledExample> cal,
                                std::span<const double> confidences);

}  // namespace cpkit
