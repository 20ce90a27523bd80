#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <cpkit/core.hpp>

namespace cpkit {

enum class ClassifierMethod { lac, mondrian };
enum class RegressorMethod { abs_residual, cqr };

std::string_view to_string(ClassifierMethod method);
std::string_view to_string(RegressorMethod method);

/// Calibration state of one class in a Mondrian classifier.
struct ClassCalibration {
  std::int64_t n = 0;
  double q_hat = kInf;
  double p_threshold = -kInf;
  bool insufficient = true;

  friend bool operator==(const ClassCalibration&, const ClassCalibration&) = default;
};

/// Frozen classification calibration. For LAC the global q_hat and
/// p_threshold are set and per_class is empty; for Mondrian per_class holds
/// one entry per class (indexed like class_names) and the globals are empty.
struct CalibratedClassifier {
  ClassifierMethod method = ClassifierMethod::lac;
  double alpha = 0.1;
  std::int64_t n_cal = 0;
  std::optional<double> q_hat;
  std::optional<double> p_threshold;
  std::vector<std::string> class_names;
  std::vector<ClassCalibration> per_class;
  std::string created_at;
  bool insufficient = false;

  std::size_t class_count() const noexcept { return class_names.size(); }

  friend bool operator==(const CalibratedClassifier&, const CalibratedClassifier&) = default;
};

struct CalibratedRegressor {
  RegressorMethod method = RegressorMethod::abs_residual;
  double alpha = 0.1;
  std::int64_t n_cal = 0;
  double q_hat = kInf;
  std::optional<double> quantile_lo_level;  // cqr only
  std::optional<double> quantile_hi_level;  // cqr only
  std::string created_at;
  bool insufficient = false;

  friend bool operator==(const CalibratedRegressor&, const CalibratedRegressor&) = default;
};

/// "class_0", "class_1", ...
std::vector<std::string> default_class_names(std::size_t class_count);

/// p_threshold = 1 - q_hat, or -inf when q_hat is +inf.
double probability_threshold(double q_hat);

CalibratedClassifier calibrate_lac(std::span<const LabeledExample> cal, double alpha,
                                   std::vector<std::string> class_names = {});

/// LAC calibration from hinge scores already sorted ascending.
CalibratedClassifier lac_from_sorted_scores(std::span<const double> sorted_scores, double alpha,
                                            std::vector<std::string> class_names);

/// A LAC classifier built directly from a published probability threshold.
CalibratedClassifier classifier_from_threshold(double p_threshold, double alpha,
                                               std::vector<std::string> class_names);

CalibratedClassifier calibrate_mondrian(std::span<const LabeledExample> cal, double alpha,
                                        std::vector<std::string> class_names = {});

CalibratedRegressor calibrate_abs_regressor(std::span<const RegressionExample> cal, double alpha);

/// Quantile levels default to alpha/2 and 1 - alpha/2.
CalibratedRegressor calibrate_cqr(std::span<const RegressionExample> cal, double alpha,
                                  std::optional<double> lo_level = std::nullopt,
                                  std::optional<double> hi_level = std::nullopt);

}  // namespace cpkit
