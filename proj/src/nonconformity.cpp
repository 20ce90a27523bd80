#include <cpkit/nonconformity.hpp>

#include <cmath>
#include <sstream>

namespace cpkit {

std::string_view to_string(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::hinge: return "hinge";
    case ScoreMethod::abs_residual: return "abs_residual";
    case ScoreMethod::cqr: return "cqr";
  }
  return "unknown";
}

double hinge_score(double p_true) {
  if (!(p_true >= 0.0 && p_true <= 1.0)) {
    std::ostringstream msg;
    msg << "true-class probability " << p_true << " is outside [0,1]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  return 1.0 - p_true;
}

double absolute_residual_score(double y, double y_hat) {
  if (!std::isfinite(y) || !std::isfinite(y_hat)) {
    throw Error(ErrorCode::NonFinite, "residual inputs must be finite");
  }
  return std::abs(y - y_hat);
}

double cqr_score(double q_lo, double q_hi, double y) {
  if (!std::isfinite(q_lo) || !std::isfinite(q_hi) || !std::isfinite(y)) {
    throw Error(ErrorCode::NonFinite, "quantile band and target must be finite");
  }
  if (q_lo > q_hi) {
    std::ostringstream msg;
    msg << "q_lo " << q_lo << " exceeds q_hi " << q_hi;
    throw Error(ErrorCode::InvertedQuantiles, msg.str());
  }
  return std::max(q_lo - y, y - q_hi);
}

namespace {

[[noreturn]] void missing(std::size_t index, std::string_view field) {
  std::ostringstream msg;
  msg << "example " << index << " has no " << field;
  throw Error(ErrorCode::MissingField, msg.str());
}

}  // namespace

ScoreVector score_calibration_set(std::span<const LabeledExample> examples, ScoreMethod method) {
  if (method != ScoreMethod::hinge) {
    throw Error(ErrorCode::InvalidArgument, "labelled examples only support the hinge score");
  }
  ScoreVector out{{}, method};
  out.scores.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.probs.class_count() == 0) missing(i, "probabilities");
    if (ex.label >= ex.probs.class_count()) {
      std::ostringstream msg;
      msg << "example " << i << " label " << ex.label << " outside class range";
      throw Error(ErrorCode::OutOfRange, msg.str());
    }
    out.scores.push_back(hinge_score(ex.probs[ex.label]));
  }
  return out;
}

ScoreVector score_calibration_set(std::span<const RegressionExample> examples,
                                  ScoreMethod method) {
  ScoreVector out{{}, method};
  out.scores.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    switch (method) {
      case ScoreMethod::abs_residual:
        if (!ex.y_hat) missing(i, "y_hat");
        out.scores.push_back(absolute_residual_score(ex.y, *ex.y_hat));
        break;
      case ScoreMethod::cqr:
        if (!ex.q_lo) missing(i, "q_lo");
        if (!ex.q_hi) missing(i, "q_hi");
        out.scores.push_back(cqr_score(*ex.q_lo, *ex.q_hi, ex.y));
        break;
      case ScoreMethod::hinge:
        throw Error(ErrorCode::InvalidArgument, "regression examples cannot use the hinge score");
    }
  }
  return out;
}

}  // namespace cpkit
