#include <cpkit/calibration.hpp>

#include <algorithm>
#include <sstream>

#include <cpkit/nonconformity.hpp>

namespace cpkit {

std::string_view to_string(ClassifierMethod method) {
  return method == ClassifierMethod::lac ? "lac" : "mondrian";
}

std::string_view to_string(RegressorMethod method) {
  return method == RegressorMethod::abs_residual ? "abs_residual" : "cqr";
}

std::vector<std::string> default_class_names(std::size_t class_count) {
  std::vector<std::string> names;
  names.reserve(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    names.push_back("class_" + std::to_string(c));
  }
  return names;
}

double probability_threshold(double q_hat) {
  return q_hat == kInf ? -kInf : 1.0 - q_hat;
}

namespace {

std::size_t shared_class_count(std::span<const LabeledExample> cal) {
  if (cal.empty()) {
    throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  }
  const std::size_t k = cal.front().probs.class_count();
  for (std::size_t i = 1; i < cal.size(); ++i) {
    if (cal[i].probs.class_count() != k) {
      std::ostringstream msg;
      msg << "example " << i << " has " << cal[i].probs.class_count() << " classes, expected "
          << k;
      throw Error(ErrorCode::ClassCountMismatch, msg.str());
    }
  }
  return k;
}

std::vector<std::string> resolve_names(std::vector<std::string> names, std::size_t class_count) {
  if (names.empty()) return default_class_names(class_count);
  if (names.size() != class_count) {
    std::ostringstream msg;
    msg << names.size() << " class names for " << class_count << " classes";
    throw Error(ErrorCode::ClassCountMismatch, msg.str());
  }
  return names;
}

}  // namespace

CalibratedClassifier lac_from_sorted_scores(std::span<const double> sorted_scores, double alpha,
                                            std::vector<std::string> class_names) {
  if (sorted_scores.empty()) {
    throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  }
  const auto quantile = conformal_quantile_sorted(sorted_scores, alpha);
  CalibratedClassifier model;
  model.method = ClassifierMethod::lac;
  model.alpha = alpha;
  model.n_cal = quantile.n_cal;
  model.q_hat = quantile.q_hat;
  model.p_threshold = probability_threshold(quantile.q_hat);
  model.class_names = std::move(class_names);
  model.insufficient = quantile.insufficient_calibration;
  return model;
}

CalibratedClassifier calibrate_lac(std::span<const LabeledExample> cal, double alpha,
                                   std::vector<std::string> class_names) {
  const auto class_count = shared_class_count(cal);
  auto names = resolve_names(std::move(class_names), class_count);
  auto scores = score_calibration_set(cal).scores;
  std::sort(scores.begin(), scores.end());
  return lac_from_sorted_scores(scores, alpha, std::move(names));
}

CalibratedClassifier classifier_from_threshold(double p_threshold, double alpha,
                                               std::vector<std::string> class_names) {
  check_alpha(alpha);
  if (!(p_threshold >= 0.0 && p_threshold <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "probability threshold must lie in [0,1]");
  }
  if (class_names.empty()) {
    throw Error(ErrorCode::ClassCountMismatch, "at least one class name is required");
  }
  CalibratedClassifier model;
  model.method = ClassifierMethod::lac;
  model.alpha = alpha;
  model.q_hat = 1.0 - p_threshold;
  model.p_threshold = p_threshold;
  model.class_names = std::move(class_names);
  return model;
}

CalibratedClassifier calibrate_mondrian(std::span<const LabeledExample> cal, double alpha,
                                        std::vector<std::string> class_names) {
  check_alpha(alpha);
  const auto class_count = shared_class_count(cal);
  auto names = resolve_names(std::move(class_names), class_count);
  const auto scores = score_calibration_set(cal).scores;

  std::vector<std::vector<double>> by_class(class_count);
  for (std::size_t i = 0; i < cal.size(); ++i) {
    by_class[cal[i].label].push_back(scores[i]);
  }

  CalibratedClassifier model;
  model.method = ClassifierMethod::mondrian;
  model.alpha = alpha;
  model.n_cal = static_cast<std::int64_t>(cal.size());
  model.class_names = std::move(names);
  model.per_class.resize(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& entry = model.per_class[c];
    if (by_class[c].empty()) {
      entry = ClassCalibration{};
    } else {
      const auto quantile = conformal_quantile(by_class[c], alpha);
      entry.n = quantile.n_cal;
      entry.q_hat = quantile.q_hat;
      entry.p_threshold = probability_threshold(quantile.q_hat);
      entry.insufficient = quantile.insufficient_calibration;
    }
    model.insufficient = model.insufficient || entry.insufficient;
  }
  return model;
}

CalibratedRegressor calibrate_abs_regressor(std::span<const RegressionExample> cal,
                                            double alpha) {
  if (cal.empty()) {
    throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  }
  const auto scores = score_calibration_set(cal, ScoreMethod::abs_residual).scores;
  const auto quantile = conformal_quantile(scores, alpha);
  CalibratedRegressor model;
  model.method = RegressorMethod::abs_residual;
  model.alpha = alpha;
  model.n_cal = quantile.n_cal;
  model.q_hat = quantile.q_hat;
  model.insufficient = quantile.insufficient_calibration;
  return model;
}

CalibratedRegressor calibrate_cqr(std::span<const RegressionExample> cal, double alpha,
                                  std::optional<double> lo_level, std::optional<double> hi_level) {
  check_alpha(alpha);
  const double lo = lo_level.value_or(alpha / 2.0);
  const double hi = hi_level.value_or(1.0 - alpha / 2.0);
  if (!(lo > 0.0 && hi < 1.0 && lo < hi)) {
    std::ostringstream msg;
    msg << "quantile levels must satisfy 0 < lo < hi < 1, got " << lo << ", " << hi;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  if (cal.empty()) {
    throw Error(ErrorCode::EmptyCalibration, "calibration set is empty");
  }
  const auto scores = score_calibration_set(cal, ScoreMethod::cqr).scores;
  const auto quantile = conformal_quantile(scores, alpha);
  CalibratedRegressor model;
  model.method = RegressorMethod::cqr;
  model.alpha = alpha;
  model.n_cal = quantile.n_cal;
  model.q_hat = quantile.q_hat;
  model.quantile_lo_level = lo;
  model.quantile_hi_level = hi;
  model.insufficient = quantile.insufficient_calibration;
  return model;
}

}  // namespace cpkit
