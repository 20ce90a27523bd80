#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpkit {

enum class ErrorCode {
  // core
  EmptyVector,
  EntryOutOfRange,
  SumOutOfTolerance,
  EmptyScores,
  NonFiniteScore,
  InvalidArgument,
  // nonconformity / calibration
  OutOfRange,
  NonFinite,
  InvertedQuantiles,
  MissingField,
  EmptyCalibration,
  ClassCountMismatch,
  // prediction
  InsufficientCalibration,
  // evaluation
  LengthMismatch,
  EmptyInput,
  FewerThanTwoGroups,
  // datasets
  InvalidSpec,
  BadProportions,
  TooFewGroups,
  TooFewPoints,
  DegenerateCoordinates,
  KTooLarge,
  // raster
  HeaderParseError,
  PayloadSizeMismatch,
  UnsupportedBandCount,
  ClassMismatch,
  AllNodata,
  IoError,
  // artifacts and tables
  ArtifactParseError,
  TableParseError,
};

std::string_view to_string(ErrorCode code);

/// Data or validation failure raised by every cpkit operation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the error-code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace cpkit
