#include <cpkit/core.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::EntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvertedQuantiles: return "InvertedQuantiles";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyCalibration: return "EmptyCalibration";
    case ErrorCode::ClassCountMismatch: return "ClassCountMismatch";
    case ErrorCode::InsufficientCalibration: return "InsufficientCalibration";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FewerThanTwoGroups: return "FewerThanTwoGroups";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::BadProportions: return "BadProportions";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateCoordinates: return "DegenerateCoordinates";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::HeaderParseError: return "HeaderParseError";
    case ErrorCode::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case ErrorCode::UnsupportedBandCount: return "UnsupportedBandCount";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::AllNodata: return "AllNodata";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ArtifactParseError: return "ArtifactParseError";
    case ErrorCode::TableParseError: return "TableParseError";
  }
  return "Unknown";
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0,1), got " << alpha;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

ConfidenceSpec ConfidenceSpec::from_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    std::ostringstream msg;
    msg << "confidence must lie in (0,1), got " << confidence;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return ConfidenceSpec(confidence);
}

ConfidenceSpec ConfidenceSpec::from_alpha(double alpha) {
  check_alpha(alpha);
  return ConfidenceSpec(1.0 - alpha);
}

ProbabilityVector validate_probability_vector(std::vector<double> values, double tolerance) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyVector, "probability vector has no entries");
  }
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  }
  detail::CompensatedSum sum;
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double v = values[c];
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream msg;
      msg << "entry " << c << " = " << v << " is outside [0,1]";
      throw Error(ErrorCode::EntryOutOfRange, msg.str());
    }
    sum.add(v);
  }
  if (std::abs(sum.value() - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "entries sum to " << sum.value() << ", tolerance " << tolerance;
    throw Error(ErrorCode::SumOutOfTolerance, msg.str());
  }
  return ProbabilityVector(std::move(values));
}

LabeledExample make_labeled_example(ProbabilityVector probs, std::size_t label,
                                    std::optional<std::string> group) {
  if (label >= probs.class_count()) {
    std::ostringstream msg;
    msg << "label " << label << " outside [0," << probs.class_count() << ")";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  return LabeledExample{std::move(probs), label, std::move(group)};
}

std::int64_t order_statistic_index(std::int64_t n_cal, double alpha) {
  if (n_cal < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_cal must be at least 1");
  }
  check_alpha(alpha);
  double product = static_cast<double>(n_cal + 1) * (1.0 - alpha);
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9) {
    product = nearest;
  }
  return static_cast<std::int64_t>(std::ceil(product));
}

double quantile_level(std::int64_t n_cal, double alpha) {
  return static_cast<double>(order_statistic_index(n_cal, alpha)) / static_cast<double>(n_cal);
}

namespace {

ConformalQuantileResult make_result(std::int64_t n, double alpha) {
  ConformalQuantileResult result;
  result.n_cal = n;
  result.k = order_statistic_index(n, alpha);
  result.q_level = static_cast<double>(result.k) / static_cast<double>(n);
  result.insufficient_calibration = result.k > n;
  return result;
}

void check_scores(std::span<const double> scores) {
  if (scores.empty()) {
    throw Error(ErrorCode::EmptyScores, "no calibration scores");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      std::ostringstream msg;
      msg << "score " << i << " is not finite";
      throw Error(ErrorCode::NonFiniteScore, msg.str());
    }
  }
}

}  // namespace

ConformalQuantileResult conformal_quantile(std::span<const double> scores, double alpha) {
  check_scores(scores);
  auto result = make_result(static_cast<std::int64_t>(scores.size()), alpha);
  if (!result.insufficient_calibration) {
    std::vector<double> work(scores.begin(), scores.end());
    auto kth = work.begin() + (result.k - 1);
    std::nth_element(work.begin(), kth, work.end());
    result.q_hat = *kth;
  }
  return result;
}

ConformalQuantileResult conformal_quantile_sorted(std::span<const double> sorted_scores,
                                                  double alpha) {
  check_scores(sorted_scores);
  auto result = make_result(static_cast<std::int64_t>(sorted_scores.size()), alpha);
  if (!result.insufficient_calibration) {
    result.q_hat = sorted_scores[static_cast<std::size_t>(result.k - 1)];
  }
  return result;
}

namespace detail {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace detail

}  // namespace cpkit
