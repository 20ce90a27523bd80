#pragma once

#include <cstdint>

#include <cpkit/calibration.hpp>

namespace cpkit {

inline constexpr std::size_t kMaxSetClasses = 64;

/// Label set as a bitmask: bit c set means class c is included.
struct PredictionSet {
  std::uint64_t membership = 0;
  std::uint32_t length = 0;

  static PredictionSet from_membership(std::uint64_t membership);
  static PredictionSet full(std::size_t class_count);

  bool contains(std::size_t c) const noexcept { return c < 64 && ((membership >> c) & 1U) != 0; }
  bool empty() const noexcept { return length == 0; }

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

struct PredictionInterval {
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
  bool collapsed = false;

  bool contains(double y) const noexcept { return lower <= y && y <= upper; }

  friend bool operator==(const PredictionInterval&, const PredictionInterval&) = default;
};

struct SetOptions {
  // Add the arg-max class when the calibrated rule yields an empty set.
  bool force_non_empty = false;
};

PredictionSet predict_set_lac(const CalibratedClassifier& model, const ProbabilityVector& probs,
                              SetOptions options = {});
PredictionSet predict_set_mondrian(const CalibratedClassifier& model,
                                   const ProbabilityVector& probs, SetOptions options = {});

/// Dispatches on model.method.
PredictionSet predict_set(const CalibratedClassifier& model, const ProbabilityVector& probs,
                          SetOptions options = {});

/// Raw-span variant of predict_set() for callers that validated the simplex
/// themselves (the raster path).
PredictionSet predict_set_unchecked(const CalibratedClassifier& model,
                                    std::span<const double> probs, SetOptions options = {});

PredictionInterval predict_interval_abs(const CalibratedRegressor& model, double y_hat);
PredictionInterval predict_interval_cqr(const CalibratedRegressor& model, double q_lo,
                                        double q_hi);

}  // namespace cpkit
