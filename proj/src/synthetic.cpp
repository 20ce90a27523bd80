#include <cpkit/synthetic.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include <cpkit/rng.hpp>

namespace cpkit {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

}  // namespace

SyntheticClassSpec SyntheticClassSpec::ring(std::size_t class_count, std::size_t dimension,
                                            double radius, double sigma, std::uint64_t seed) {
  if (dimension < 2) invalid("ring layout needs at least two dimensions");
  SyntheticClassSpec spec;
  spec.sigma = sigma;
  spec.seed = seed;
  for (std::size_t c = 0; c < class_count; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(class_count);
    std::vector<double> mean(dimension, 0.0);
    mean[0] = radius * std::cos(angle);
    mean[1] = radius * std::sin(angle);
    spec.means.push_back(std::move(mean));
  }
  spec.weights.assign(class_count, 1.0 / static_cast<double>(class_count));
  return spec;
}

void validate(const SyntheticClassSpec& spec) {
  if (spec.means.empty()) invalid("at least one class is required");
  const auto d = spec.dimension();
  if (d == 0) invalid("dimension must be positive");
  for (const auto& m : spec.means) {
    if (m.size() != d) invalid("all class means must share one dimension");
  }
  if (spec.weights.size() != spec.means.size()) invalid("one weight per class is required");
  double total = 0.0;
  for (const double w : spec.weights) {
    if (!(w >= 0.0)) invalid("weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) invalid("weights must sum to 1");
  if (!(spec.sigma > 0.0)) invalid("sigma must be positive");
  if (!(spec.temperature > 0.0)) invalid("temperature must be positive");
}

ProbabilityVector class_posterior(const SyntheticClassSpec& spec, std::span<const double> x) {
  const auto k = spec.class_count();
  std::vector<double> logits(k);
  for (std::size_t c = 0; c < k; ++c) {
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - spec.means[c][j];
      sq += diff * diff;
    }
    const double log_w = spec.weights[c] > 0.0 ? std::log(spec.weights[c]) : -kInf;
    logits[c] = (log_w - sq / (2.0 * spec.sigma * spec.sigma)) / spec.temperature;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (auto& l : logits) l /= total;
  return validate_probability_vector(std::move(logits), 1e-9);
}

std::vector<ClassSample> gen_class_mixture(const SyntheticClassSpec& spec, std::size_t n) {
  validate(spec);
  if (n == 0) invalid("sample count must be positive");
  SplitMix64 rng(spec.seed);
  const auto k = spec.class_count();
  const auto d = spec.dimension();

  std::vector<ClassSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    std::size_t label = k - 1;
    double cumulative = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      cumulative += spec.weights[c];
      if (u < cumulative) {
        label = c;
        break;
      }
    }
    std::vector<double> x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = spec.means[label][j] + spec.sigma * rng.normal();
    auto oracle = class_posterior(spec, x);
    out.push_back(ClassSample{std::move(x), label, std::move(oracle)});
  }
  return out;
}

void validate(const SyntheticRegSpec& spec) {
  if (!(spec.noise_scale > 0.0)) invalid("noise scale must be positive");
  if (!(spec.x_min < spec.x_max)) invalid("input range must satisfy x_min < x_max");
}

double mean_value(const SyntheticRegSpec& spec, double x) {
  switch (spec.mean) {
    case MeanFunction::sinusoid: return 2.0 * std::sin(x);
    case MeanFunction::piecewise_linear: return std::abs(x - 0.5 * (spec.x_min + spec.x_max));
    case MeanFunction::linear: return x;
  }
  return 0.0;
}

double noise_sd(const SyntheticRegSpec& spec, double x) {
  if (spec.noise == NoiseFunction::constant) return spec.noise_scale;
  return spec.noise_scale * (0.1 + (x - spec.x_min) / (spec.x_max - spec.x_min));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::OutOfRange, "quantile level must be in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<RegSample> gen_heteroscedastic_reg(const SyntheticRegSpec& spec, std::size_t n,
                                               double lo_level, double hi_level) {
  validate(spec);
  if (n == 0) invalid("sample count must be positive");
  if (!(lo_level > 0.0 && lo_level < hi_level && hi_level < 1.0)) {
    invalid("quantile levels must satisfy 0 < lo < hi < 1");
  }
  const double z_lo = normal_quantile(lo_level);
  const double z_hi = normal_quantile(hi_level);
  SplitMix64 rng(spec.seed);
  std::vector<RegSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RegSample s;
    s.x = rng.uniform(spec.x_min, spec.x_max);
    s.mean = mean_value(spec, s.x);
    const double sd = noise_sd(spec, s.x);
    s.y = s.mean + sd * rng.normal();
    s.q_lo = s.mean + sd * z_lo;
    s.q_hi = s.mean + sd * z_hi;
    out.push_back(s);
  }
  return out;
}

double exact_expected_coverage(std::int64_t n_cal, double alpha) {
  const auto k = order_statistic_index(n_cal, alpha);
  return static_cast<double>(std::min(k, n_cal + 1)) / static_cast<double>(n_cal + 1);
}

MonteCarloCoverage coverage_oracle_mc(std::int64_t n_cal, double alpha, std::int64_t trials,
                                      std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (n_cal < 1) throw Error(ErrorCode::InvalidArgument, "n_cal must be at least 1");
  SplitMix64 rng(seed);
  std::vector<double> scores(static_cast<std::size_t>(n_cal));
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    for (auto& s : scores) s = rng.uniform();
    const double test = rng.uniform();
    const auto q = conformal_quantile(scores, alpha);
    if (test <= q.q_hat) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  MonteCarloCoverage out;
  out.mean = p;
  out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return out;
}

}  // namespace cpkit
