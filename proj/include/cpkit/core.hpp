#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <cpkit/error.hpp>

namespace cpkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultSumTolerance = 1e-3;

/// A confidence level 1 - alpha. Only the confidence is stored; alpha is
/// always derived from it so the pair cannot drift apart.
class ConfidenceSpec {
 public:
  static ConfidenceSpec from_confidence(double confidence);
  static ConfidenceSpec from_alpha(double alpha);

  double confidence() const noexcept { return confidence_; }
  double alpha() const noexcept { return 1.0 - confidence_; }

 private:
  explicit ConfidenceSpec(double confidence) : confidence_(confidence) {}
  double confidence_;
};

/// Per-class probability-like scores for one instance or pixel. Construct
/// through validate_probability_vector().
class ProbabilityVector {
 public:
  ProbabilityVector() = default;

  std::span<const double> values() const noexcept { return values_; }
  std::size_t class_count() const noexcept { return values_.size(); }
  double operator[](std::size_t c) const { return values_[c]; }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

 private:
  friend ProbabilityVector validate_probability_vector(std::vector<double>, double);
  explicit ProbabilityVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

struct LabeledExample {
  ProbabilityVector probs;
  std::size_t label = 0;
  std::optional<std::string> group;
};

struct RegressionExample {
  double y = 0.0;
  std::optional<double> y_hat;
  std::optional<double> q_lo;
  std::optional<double> q_hi;
  std::optional<std::string> group;
};

struct ConformalQuantileResult {
  double q_hat = kInf;  // +inf when the calibration set is too small
  double q_level = 0.0;
  std::int64_t k = 0;
  std::int64_t n_cal = 0;
  bool insufficient_calibration = false;
};

ProbabilityVector validate_probability_vector(std::vector<double> values,
                                              double tolerance = kDefaultSumTolerance);

/// Builds a LabeledExample, checking the label against the class count.
LabeledExample make_labeled_example(ProbabilityVector probs, std::size_t label,
                                    std::optional<std::string> group = std::nullopt);

/// Order-statistic index k = ceil((n_cal + 1)(1 - alpha)). Products within
/// 1e-9 of an integer are snapped to it before taking the ceiling.
std::int64_t order_statistic_index(std::int64_t n_cal, double alpha);

/// Finite-sample corrected quantile level k / n_cal. Values above 1 signal
/// that the calibration set is too small for the requested alpha.
double quantile_level(std::int64_t n_cal, double alpha);

/// k-th smallest calibration score (1-indexed, ties kept), or +inf when k > n.
ConformalQuantileResult conformal_quantile(std::span<const double> scores, double alpha);

/// Same as conformal_quantile() on scores that are already sorted ascending.
ConformalQuantileResult conformal_quantile_sorted(std::span<const double> sorted_scores,
                                                  double alpha);

void check_alpha(double alpha);

namespace detail {

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace detail

}  // namespace cpkit
