#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <cpkit/evaluation.hpp>
#include <cpkit/raster.hpp>

namespace cpkit {

/// Everything the evaluate step reports for one predictions file.
struct EvaluationReport {
  std::optional<std::string> method;
  std::optional<double> alpha;
  std::optional<std::string> group_column;
  CoverageReport coverage;
  EfficiencyReport efficiency;
  std::map<std::string, CoverageReport> per_class;  // classification only
};

std::string report_json(const EvaluationReport& report);
/// Two-column metric/value listing.
std::string report_tsv(const EvaluationReport& report);

/// Two columns, confidence and the probability threshold under the
/// "qHat" heading used by published threshold tables.
std::string threshold_table_tsv(const ThresholdTable& table);
std::string threshold_table_json(const ThresholdTable& table);

std::string grid_summary_json(const GridSummary& summary,
                              const std::vector<std::string>& class_names);

}  // namespace cpkit
