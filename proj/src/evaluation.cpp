#include <cpkit/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <cpkit/nonconformity.hpp>

namespace cpkit {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    std::ostringstream msg;
    msg << a << " predictions but " << b << " targets";
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
  if (a == 0) throw Error(ErrorCode::EmptyInput, "no predictions to evaluate");
}

CoverageReport from_indicators(const std::vector<double>& covered) {
  CoverageReport report;
  report.n = covered.size();
  report.covered = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 1.0));
  report.coverage = static_cast<double>(report.covered) / static_cast<double>(report.n);
  return report;
}

void add_groups(CoverageReport& report, const std::vector<double>& covered,
                std::span<const std::string> groups) {
  if (groups.size() != covered.size()) {
    std::ostringstream msg;
    msg << covered.size() << " predictions but " << groups.size() << " group keys";
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    auto& [hit, total] = tally[groups[i]];
    hit += covered[i] == 1.0 ? 1 : 0;
    ++total;
  }
  report.group_count = tally.size();
  for (const auto& [g, counts] : tally) {
    report.per_group[g] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  if (tally.size() >= 2) {
    report.standard_error = grouped_standard_error(covered, groups).standard_error;
  }
}

std::vector<double> set_indicators(std::span<const PredictionSet> sets,
                                   std::span<const std::size_t> labels) {
  check_lengths(sets.size(), labels.size());
  std::vector<double> covered(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    covered[i] = sets[i].contains(labels[i]) ? 1.0 : 0.0;
  }
  return covered;
}

std::vector<double> interval_indicators(std::span<const PredictionInterval> intervals,
                                        std::span<const double> ys) {
  check_lengths(intervals.size(), ys.size());
  std::vector<double> covered(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    covered[i] = intervals[i].contains(ys[i]) ? 1.0 : 0.0;
  }
  return covered;
}

}  // namespace

CoverageReport empirical_coverage_sets(std::span<const PredictionSet> sets,
                                       std::span<const std::size_t> labels) {
  return from_indicators(set_indicators(sets, labels));
}

CoverageReport empirical_coverage_sets(std::span<const PredictionSet> sets,
                                       std::span<const std::size_t> labels,
                                       std::span<const std::string> groups) {
  const auto covered = set_indicators(sets, labels);
  auto report = from_indicators(covered);
  add_groups(report, covered, groups);
  return report;
}

CoverageReport empirical_coverage_intervals(std::span<const PredictionInterval> intervals,
                                            std::span<const double> ys) {
  return from_indicators(interval_indicators(intervals, ys));
}

CoverageReport empirical_coverage_intervals(std::span<const PredictionInterval> intervals,
                                            std::span<const double> ys,
                                            std::span<const std::string> groups) {
  const auto covered = interval_indicators(intervals, ys);
  auto report = from_indicators(covered);
  add_groups(report, covered, groups);
  return report;
}

EfficiencyReport efficiency_report(std::span<const PredictionSet> sets,
                                   std::optional<std::size_t> class_count) {
  if (sets.empty()) throw Error(ErrorCode::EmptyInput, "no prediction sets");
  std::uint64_t total_length = 0;
  std::size_t empty = 0;
  std::size_t full = 0;
  for (const auto& s : sets) {
    total_length += s.length;
    empty += s.length == 0 ? 1 : 0;
    if (class_count && s.length == *class_count) ++full;
  }
  const auto n = static_cast<double>(sets.size());
  EfficiencyReport report;
  report.n = sets.size();
  report.mean_set_size = static_cast<double>(total_length) / n;
  report.empty_set_fraction = static_cast<double>(empty) / n;
  if (class_count) report.full_set_fraction = static_cast<double>(full) / n;
  return report;
}

EfficiencyReport efficiency_report(std::span<const PredictionInterval> intervals) {
  if (intervals.empty()) throw Error(ErrorCode::EmptyInput, "no prediction intervals");
  detail::CompensatedSum sum;
  for (const auto& iv : intervals) sum.add(iv.width);
  EfficiencyReport report;
  report.n = intervals.size();
  report.mean_interval_width = sum.value() / static_cast<double>(intervals.size());
  return report;
}

GroupedMean grouped_standard_error(std::span<const double> values,
                                   std::span<const std::string> groups) {
  if (values.size() != groups.size()) {
    std::ostringstream msg;
    msg << values.size() << " values but " << groups.size() << " group keys";
    throw Error(ErrorCode::LengthMismatch, msg.str());
  }
  std::map<std::string, std::pair<detail::CompensatedSum, std::size_t>> tally;
  detail::CompensatedSum grand;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& [sum, count] = tally[groups[i]];
    sum.add(values[i]);
    ++count;
    grand.add(values[i]);
  }
  if (tally.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoGroups, "a grouped standard error needs >= 2 groups");
  }

  GroupedMean result;
  result.mean = grand.value() / static_cast<double>(values.size());
  detail::CompensatedSum mean_of_means;
  for (const auto& [g, acc] : tally) {
    const double m = acc.first.value() / static_cast<double>(acc.second);
    result.per_group[g] = m;
    mean_of_means.add(m);
  }
  const auto group_count = static_cast<double>(tally.size());
  const double centre = mean_of_means.value() / group_count;
  detail::CompensatedSum squares;
  for (const auto& [g, m] : result.per_group) squares.add((m - centre) * (m - centre));
  const double sd = std::sqrt(squares.value() / (group_count - 1.0));
  result.standard_error = sd / std::sqrt(group_count);
  return result;
}

std::map<std::size_t, CoverageReport> per_class_coverage(std::span<const PredictionSet> sets,
                                                         std::span<const std::size_t> labels,
                                                         std::size_t class_count) {
  check_lengths(sets.size(), labels.size());
  std::vector<std::size_t> hits(class_count, 0);
  std::vector<std::size_t> totals(class_count, 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (labels[i] >= class_count) {
      std::ostringstream msg;
      msg << "label " << labels[i] << " at row " << i << " is outside [0," << class_count << ")";
      throw Error(ErrorCode::OutOfRange, msg.str());
    }
    ++totals[labels[i]];
    hits[labels[i]] += sets[i].contains(labels[i]) ? 1 : 0;
  }
  std::map<std::size_t, CoverageReport> out;
  for (std::size_t c = 0; c < class_count; ++c) {
    if (totals[c] == 0) continue;
    CoverageReport r;
    r.n = totals[c];
    r.covered = hits[c];
    r.coverage = static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
    out.emplace(c, r);
  }
  return out;
}

ThresholdTable sweep_thresholds(std::span<const LabeledExample> cal,
                                std::span<const double> confidences) {
  if (cal.empty()) throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  const auto class_count = cal.front().probs.class_count();
  const auto names = default_class_names(class_count);

  auto scores = score_calibration_set(cal).scores;
  std::sort(scores.begin(), scores.end());

  std::vector<double> levels(confidences.begin(), confidences.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());

  ThresholdTable table;
  table.n_cal = static_cast<std::int64_t>(scores.size());
  for (const double c : levels) {
    const auto spec = ConfidenceSpec::from_confidence(c);
    const auto model = lac_from_sorted_scores(scores, spec.alpha(), names);
    table.rows.push_back(ThresholdRow{c, *model.q_hat, *model.p_threshold});
  }
  return table;
}

}  // namespace cpkit
