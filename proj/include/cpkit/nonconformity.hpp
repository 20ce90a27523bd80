#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <cpkit/core.hpp>

namespace cpkit {

enum class ScoreMethod { hinge, abs_residual, cqr };

std::string_view to_string(ScoreMethod method);

struct ScoreVector {
  std::vector<double> scores;
  ScoreMethod method = ScoreMethod::hinge;
};

/// 1 - p for the probability assigned to the true class.
double hinge_score(double p_true);

double absolute_residual_score(double y, double y_hat);

/// max(q_lo - y, y - q_hi); negative inside the band.
double cqr_score(double q_lo, double q_hi, double y);

ScoreVector score_calibration_set(std::span<const LabeledExample> examples,
                                  ScoreMethod method = ScoreMethod::hinge);

ScoreVector score_calibration_set(std::span<const RegressionExample> examples,
                                  ScoreMethod method);

}  // namespace cpkit
