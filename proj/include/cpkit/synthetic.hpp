#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <cpkit/core.hpp>

namespace cpkit {

/// Isotropic Gaussian mixture with a closed-form Bayes posterior.
/// temperature = 1 gives the exact posterior; other values give a
/// miscalibrated (but still usable) probability model.
struct SyntheticClassSpec {
  std::vector<std::vector<double>> means;  // one point per class
  std::vector<double> weights;             // mixture weights, sum 1
  double sigma = 1.0;
  double temperature = 1.0;
  std::uint64_t seed = 0;

  std::size_t class_count() const noexcept { return means.size(); }
  std::size_t dimension() const noexcept { return means.empty() ? 0 : means.front().size(); }

  /// K class means evenly spaced on a circle of `radius` in the first two
  /// coordinates (remaining coordinates zero), equal weights.
  static SyntheticClassSpec ring(std::size_t class_count, std::size_t dimension, double radius,
                                 double sigma, std::uint64_t seed);
};

struct ClassSample {
  std::vector<double> features;
  std::size_t label = 0;
  ProbabilityVector oracle;
};

void validate(const SyntheticClassSpec& spec);

/// Temperature-scaled Bayes posterior at x.
ProbabilityVector class_posterior(const SyntheticClassSpec& spec, std::span<const double> x);

std::vector<ClassSample> gen_class_mixture(const SyntheticClassSpec& spec, std::size_t n);

enum class MeanFunction { sinusoid, piecewise_linear, linear };
enum class NoiseFunction { constant, increasing };

/// y = f(x) + sd(x) * eps, eps ~ N(0,1), x ~ U(x_min, x_max).
///   sinusoid:          f(x) = 2 sin(x)
///   piecewise_linear:  f(x) = |x - centre of range|
///   linear:            f(x) = x
///   constant noise:    sd(x) = noise_scale
///   increasing noise:  sd(x) = noise_scale * (0.1 + (x - x_min) / (x_max - x_min))
struct SyntheticRegSpec {
  MeanFunction mean = MeanFunction::sinusoid;
  NoiseFunction noise = NoiseFunction::increasing;
  double noise_scale = 1.0;
  double x_min = 0.0;
  double x_max = 6.283185307179586;
  std::uint64_t seed = 0;
};

struct RegSample {
  double x = 0.0;
  double y = 0.0;
  double mean = 0.0;  // f(x), the oracle point prediction
  double q_lo = 0.0;  // oracle conditional quantiles at the requested levels
  double q_hi = 0.0;
};

void validate(const SyntheticRegSpec& spec);
double mean_value(const SyntheticRegSpec& spec, double x);
double noise_sd(const SyntheticRegSpec& spec, double x);

/// Standard normal quantile.
double normal_quantile(double p);

std::vector<RegSample> gen_heteroscedastic_reg(const SyntheticRegSpec& spec, std::size_t n,
                                               double lo_level = 0.05, double hi_level = 0.95);

struct MonteCarloCoverage {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Simulates split-conformal coverage with i.i.d. uniform scores.
MonteCarloCoverage coverage_oracle_mc(std::int64_t n_cal, double alpha, std::int64_t trials,
                                      std::uint64_t seed);

/// Exact expected coverage k / (n_cal + 1) for continuous scores.
double exact_expected_coverage(std::int64_t n_cal, double alpha);

}  // namespace cpkit
