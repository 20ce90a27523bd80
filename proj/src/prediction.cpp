#include <cpkit/prediction.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <cpkit/nonconformity.hpp>

namespace cpkit {

PredictionSet PredictionSet::from_membership(std::uint64_t membership) {
  return PredictionSet{membership, static_cast<std::uint32_t>(std::popcount(membership))};
}

PredictionSet PredictionSet::full(std::size_t class_count) {
  const std::uint64_t mask = class_count >= 64 ? ~std::uint64_t{0}
                                               : (std::uint64_t{1} << class_count) - 1;
  return from_membership(mask);
}

namespace {

void check_class_count(const CalibratedClassifier& model, std::size_t class_count) {
  if (class_count != model.class_count()) {
    std::ostringstream msg;
    msg << "probability vector has " << class_count << " classes, model has "
        << model.class_count();
    throw Error(ErrorCode::ClassCountMismatch, msg.str());
  }
  if (class_count > kMaxSetClasses) {
    throw Error(ErrorCode::ClassCountMismatch, "prediction sets support at most 64 classes");
  }
}

PredictionSet finish(std::uint64_t membership, std::span<const double> probs,
                     SetOptions options) {
  if (membership == 0 && options.force_non_empty) {
    const auto argmax = std::max_element(probs.begin(), probs.end()) - probs.begin();
    membership = std::uint64_t{1} << argmax;
  }
  return PredictionSet::from_membership(membership);
}

// Inclusion is decided in score space (1 - p <= q_hat), the same arithmetic
// used to score the calibration set, so ties at the threshold are kept.
PredictionSet lac_rule(const CalibratedClassifier& model, std::span<const double> probs,
                       SetOptions options) {
  if (model.insufficient || !model.q_hat || *model.q_hat == kInf) {
    return PredictionSet::full(probs.size());
  }
  const double q_hat = *model.q_hat;
  std::uint64_t membership = 0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (1.0 - probs[c] <= q_hat) membership |= std::uint64_t{1} << c;
  }
  return finish(membership, probs, options);
}

PredictionSet mondrian_rule(const CalibratedClassifier& model, std::span<const double> probs,
                            SetOptions options) {
  if (model.per_class.size() != probs.size()) {
    throw Error(ErrorCode::ClassCountMismatch, "mondrian model lacks per-class calibration");
  }
  std::uint64_t membership = 0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    const double q_hat = model.per_class[c].q_hat;
    if (q_hat == kInf || 1.0 - probs[c] <= q_hat) membership |= std::uint64_t{1} << c;
  }
  return finish(membership, probs, options);
}

}  // namespace

PredictionSet predict_set_lac(const CalibratedClassifier& model, const ProbabilityVector& probs,
                              SetOptions options) {
  if (model.method != ClassifierMethod::lac) {
    throw Error(ErrorCode::InvalidArgument, "predict_set_lac requires a lac model");
  }
  check_class_count(model, probs.class_count());
  return lac_rule(model, probs.values(), options);
}

PredictionSet predict_set_mondrian(const CalibratedClassifier& model,
                                   const ProbabilityVector& probs, SetOptions options) {
  if (model.method != ClassifierMethod::mondrian) {
    throw Error(ErrorCode::InvalidArgument, "predict_set_mondrian requires a mondrian model");
  }
  check_class_count(model, probs.class_count());
  return mondrian_rule(model, probs.values(), options);
}

PredictionSet predict_set(const CalibratedClassifier& model, const ProbabilityVector& probs,
                          SetOptions options) {
  return model.method == ClassifierMethod::lac ? predict_set_lac(model, probs, options)
                                               : predict_set_mondrian(model, probs, options);
}

PredictionSet predict_set_unchecked(const CalibratedClassifier& model,
                                    std::span<const double> probs, SetOptions options) {
  return model.method == ClassifierMethod::lac ? lac_rule(model, probs, options)
                                               : mondrian_rule(model, probs, options);
}

namespace {

void require_bounded(const CalibratedRegressor& model) {
  if (model.insufficient || model.q_hat == kInf) {
    std::ostringstream msg;
    msg << "calibration set of " << model.n_cal << " is too small for alpha " << model.alpha
        << "; the interval is unbounded";
    throw Error(ErrorCode::InsufficientCalibration, msg.str());
  }
}

}  // namespace

PredictionInterval predict_interval_abs(const CalibratedRegressor& model, double y_hat) {
  if (model.method != RegressorMethod::abs_residual) {
    throw Error(ErrorCode::InvalidArgument, "predict_interval_abs requires an abs_residual model");
  }
  if (!std::isfinite(y_hat)) throw Error(ErrorCode::NonFinite, "y_hat must be finite");
  require_bounded(model);
  const double lower = y_hat - model.q_hat;
  const double upper = y_hat + model.q_hat;
  return PredictionInterval{lower, upper, upper - lower, false};
}

PredictionInterval predict_interval_cqr(const CalibratedRegressor& model, double q_lo,
                                        double q_hi) {
  if (model.method != RegressorMethod::cqr) {
    throw Error(ErrorCode::InvalidArgument, "predict_interval_cqr requires a cqr model");
  }
  if (!std::isfinite(q_lo) || !std::isfinite(q_hi)) {
    throw Error(ErrorCode::NonFinite, "quantile predictions must be finite");
  }
  if (q_lo > q_hi) {
    std::ostringstream msg;
    msg << "q_lo " << q_lo << " exceeds q_hi " << q_hi;
    throw Error(ErrorCode::InvertedQuantiles, msg.str());
  }
  require_bounded(model);
  const double lower = q_lo - model.q_hat;
  const double upper = q_hi + model.q_hat;
  if (lower > upper) {
    const double mid = 0.5 * (q_lo + q_hi);
    return PredictionInterval{mid, mid, 0.0, true};
  }
  return PredictionInterval{lower, upper, upper - lower, false};
}

}  // namespace cpkit
