// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every statistical check runs on fixed seeds, so the output
// is identical from run to run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <cpkit/artifact.hpp>
#include <cpkit/evaluation.hpp>
#include <cpkit/knn.hpp>
#include <cpkit/prediction.hpp>
#include <cpkit/raster.hpp>
#include <cpkit/rng.hpp>
#include <cpkit/splits.hpp>
#include <cpkit/synthetic.hpp>

#include "support/oracles.hpp"

using namespace cpkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<std::size_t> labels_of(std::span<const ClassSample> samples) {
  std::vector<std::size_t> out;
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

std::vector<LabeledExample> as_examples(std::span<const ClassSample> samples) {
  std::vector<LabeledExample> out;
  for (const auto& s : samples) out.push_back(make_labeled_example(s.oracle, s.label));
  return out;
}

// ---------------------------------------------------------------------------

Outcome quantile_level_table() {
  // n, alpha as num/den, hand-computed k = ceil((n + 1)(1 - alpha))
  struct Row {
    std::int64_t n, num, den, k;
  };
  const Row rows[] = {
      {100, 1, 10, 91},  {4, 1, 2, 3},     {9, 1, 20, 10},   {9, 1, 10, 9},
      {19, 1, 20, 19},   {99, 1, 100, 99}, {1000, 1, 10, 901}, {500, 1, 10, 451},
      {1000, 1, 20, 951}, {10, 1, 10, 10},  {10, 1, 100, 11},  {1, 1, 2, 1},
      {1, 1, 10, 2},     {3, 1, 4, 3},     {2, 1, 5, 3},     {20, 3, 10, 15},
      {49, 1, 50, 49},   {7, 1, 5, 7},     {30, 3, 20, 27},  {199, 1, 200, 199},
  };
  int mismatches = 0, at_n = 0, above_n = 0;
  for (const auto& r : rows) {
    const double alpha = static_cast<double>(r.num) / static_cast<double>(r.den);
    const bool ok = order_statistic_index(r.n, alpha) == r.k &&
                    testing::exact_order_index(r.n, r.num, r.den) == r.k &&
                    quantile_level(r.n, alpha) == static_cast<double>(r.k) / r.n;
    std::vector<double> scores(static_cast<std::size_t>(r.n));
    std::iota(scores.begin(), scores.end(), 1.0);
    const auto q = conformal_quantile(scores, alpha);
    const bool q_ok = r.k > r.n ? (q.insufficient_calibration && std::isinf(q.q_hat))
                                : (!q.insufficient_calibration && q.q_hat == double(r.k));
    mismatches += (ok && q_ok) ? 0 : 1;
    at_n += r.k == r.n ? 1 : 0;
    above_n += r.k == r.n + 1 ? 1 : 0;
  }
  return {mismatches == 0 && at_n > 0 && above_n > 0,
          fmt("20 pairs, %d mismatches, %d with k=n, %d with k=n+1", mismatches, at_n, above_n)};
}

Outcome marginal_coverage() {
  const std::size_t n_cal = 500, n_test = 5000;
  const double alpha = 0.10;
  std::vector<double> coverage;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto spec = SyntheticClassSpec::ring(5, 2, 2.0, 1.0, derive_seed(2002, s));
    const auto data = gen_class_mixture(spec, n_cal + n_test);
    const std::span<const ClassSample> all(data);
    const auto cal = as_examples(all.first(n_cal));
    const auto model = calibrate_lac(cal, alpha);
    std::vector<PredictionSet> sets;
    for (const auto& x : all.subspan(n_cal)) sets.push_back(predict_set(model, x.oracle));
    coverage.push_back(empirical_coverage_sets(sets, labels_of(all.subspan(n_cal))).coverage);
  }
  const auto m = testing::mean_se(coverage);
  const double target = exact_expected_coverage(n_cal, alpha);
  const double lo = 0.900 - 3 * m.se, hi = 0.902 + 3 * m.se;
  return {lo <= m.mean && m.mean <= hi,
          fmt("mean %.5f se %.5f target %.5f window [%.5f, %.5f]", m.mean, m.se, target, lo, hi)};
}

Outcome rank_enumeration() {
  int failures = 0;
  long permutations = 0;
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (auto [num, den] : {std::pair{1, 10}, std::pair{1, 4}, std::pair{1, 2}}) {
      const double alpha = double(num) / den;
      const auto e = testing::enumerate_ranks(
          n, [&](std::span<const double> cal) { return conformal_quantile(cal, alpha).q_hat; });
      const std::int64_t k = testing::exact_order_index(n, num, den);
      // covered / total == min(k, n + 1) / (n + 1), compared exactly
      failures += e.covered * (n + 1) == std::min(k, n + 1) * e.total ? 0 : 1;

      std::vector<double> ranks(static_cast<std::size_t>(n));
      std::iota(ranks.begin(), ranks.end(), 1.0);
      do {
        const auto q = conformal_quantile(ranks, alpha);
        const double expected = k > n ? kInf : testing::sorted_kth(ranks, k);
        failures += q.q_hat == expected ? 0 : 1;
        ++permutations;
      } while (std::next_permutation(ranks.begin(), ranks.end()));
    }
  }
  return {failures == 0,
          fmt("18 (n, alpha) cells, %ld calibration permutations, %d failures", permutations,
              failures)};
}

Outcome threshold_table_shape() {
  const std::vector<double> confidences{0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
  int threshold_violations = 0, size_violations = 0, sweep_mismatches = 0;
  SplitMix64 meta(404);
  for (std::uint64_t s = 0; s < 100; ++s) {
    SyntheticClassSpec spec = SyntheticClassSpec::ring(3 + meta.below(7), 2, meta.uniform(1, 3),
                                                       1.0, derive_seed(4004, s));
    spec.temperature = meta.uniform(0.5, 4.0);
    const std::size_t n_cal = 100 + meta.below(1900);
    const auto data = gen_class_mixture(spec, n_cal + 2000);
    const std::span<const ClassSample> all(data);
    const auto cal = as_examples(all.first(n_cal));
    const auto table = sweep_thresholds(cal, confidences);

    // rows run from 0.95 down to 0.70
    double previous_size = kInf;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      if (r > 0 && row.p_threshold < table.rows[r - 1].p_threshold) ++threshold_violations;
      const auto model = calibrate_lac(cal, ConfidenceSpec::from_confidence(row.confidence).alpha());
      if (*model.q_hat != row.q_hat || *model.p_threshold != row.p_threshold) ++sweep_mismatches;
      std::vector<PredictionSet> sets;
      for (const auto& x : all.subspan(n_cal)) sets.push_back(predict_set(model, x.oracle));
      const double size = *efficiency_report(sets).mean_set_size;
      if (size > previous_size) ++size_violations;
      previous_size = size;
    }
  }
  return {threshold_violations == 0 && size_violations == 0 && sweep_mismatches == 0,
          fmt("100 sets: %d threshold order violations, %d set-size order violations, %d sweep "
              "mismatches",
              threshold_violations, size_violations, sweep_mismatches)};
}

Outcome cqr_validity_and_adaptivity() {
  const std::size_t n_train = 2000, n_cal = 1000, n_test = 5000, k = 50;
  const double alpha = 0.05;
  const std::vector<double> levels{alpha / 2, 1 - alpha / 2};
  std::vector<double> coverage;
  int adaptive = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    SyntheticRegSpec spec;
    spec.mean = MeanFunction::sinusoid;
    spec.noise = NoiseFunction::increasing;
    spec.seed = derive_seed(5005, s);
    const auto data = gen_heteroscedastic_reg(spec, n_train + n_cal + n_test);
    std::vector<RegressionTrainingPoint> train;
    for (std::size_t i = 0; i < n_train; ++i) train.push_back({{data[i].x}, data[i].y});

    auto band = [&](const RegSample& x) {
      const double q[] = {x.x};
      return knn_quantiles(train, q, k, levels);
    };
    std::vector<RegressionExample> cal;
    for (std::size_t i = n_train; i < n_train + n_cal; ++i) {
      const auto b = band(data[i]);
      cal.push_back({data[i].y, std::nullopt, b[0], b[1], std::nullopt});
    }
    const auto model = calibrate_cqr(cal, alpha);

    std::vector<std::pair<double, PredictionInterval>> by_x;
    std::vector<PredictionInterval> intervals;
    std::vector<double> ys;
    for (std::size_t i = n_train + n_cal; i < data.size(); ++i) {
      const auto b = band(data[i]);
      intervals.push_back(predict_interval_cqr(model, b[0], b[1]));
      ys.push_back(data[i].y);
      by_x.emplace_back(data[i].x, intervals.back());
    }
    coverage.push_back(empirical_coverage_intervals(intervals, ys).coverage);

    // noise grows with x, so the x deciles are the noise deciles
    std::sort(by_x.begin(), by_x.end(), [](auto& a, auto& b) { return a.first < b.first; });
    const std::size_t decile = by_x.size() / 10;
    double bottom = 0, top = 0;
    for (std::size_t i = 0; i < decile; ++i) {
      bottom += by_x[i].second.width;
      top += by_x[by_x.size() - 1 - i].second.width;
    }
    adaptive += top > bottom ? 1 : 0;
  }
  const auto m = testing::mean_se(coverage);
  return {0.949 <= m.mean && m.mean <= 0.953 && adaptive >= 95,
          fmt("mean coverage %.5f (se %.5f, exact target %.5f), top decile wider in %d/100 seeds",
              m.mean, m.se, exact_expected_coverage(n_cal, alpha), adaptive)};
}

Outcome nestedness() {
  auto spec = SyntheticClassSpec::ring(6, 2, 1.5, 1.0, 6006);
  const auto cal = as_examples(gen_class_mixture(spec, 1000));
  std::vector<double> grid;
  for (int c = 70; c <= 95; c += 5) grid.push_back(c / 100.0);
  std::vector<CalibratedClassifier> models;
  for (double c : grid) models.push_back(calibrate_lac(cal, ConfidenceSpec::from_confidence(c).alpha()));

  SplitMix64 rng(6007);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(6);
    double total = 0;
    for (auto& x : v) total += (x = -std::log(rng.uniform_open()));
    for (auto& x : v) x /= total;
    const auto p = validate_probability_vector(v, 1e-9);
    for (std::size_t a = 0; a < models.size(); ++a) {
      for (std::size_t b = a + 1; b < models.size(); ++b) {
        const auto small = predict_set(models[a], p).membership;
        const auto large = predict_set(models[b], p).membership;
        violations += (small & ~large) == 0 ? 0 : 1;
      }
    }
  }
  return {violations == 0, fmt("1000 vectors x 15 confidence pairs, %d violations", violations)};
}

Outcome mondrian_per_class() {
  const std::size_t n_cal = 1000, n_test = 5000, K = 3;
  const double alpha = 0.1;
  std::vector<std::vector<double>> mondrian(K), lac(K);
  std::vector<int> lac_under(K, 0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto spec = SyntheticClassSpec::ring(K, 2, 1.5, 1.0, derive_seed(7007, s));
    spec.weights = {0.7, 0.2, 0.1};
    const auto data = gen_class_mixture(spec, n_cal + n_test);
    const std::span<const ClassSample> all(data);
    const auto cal = as_examples(all.first(n_cal));
    const auto m_model = calibrate_mondrian(cal, alpha);
    const auto l_model = calibrate_lac(cal, alpha);
    std::vector<PredictionSet> m_sets, l_sets;
    for (const auto& x : all.subspan(n_cal)) {
      m_sets.push_back(predict_set(m_model, x.oracle));
      l_sets.push_back(predict_set(l_model, x.oracle));
    }
    const auto labels = labels_of(all.subspan(n_cal));
    const auto m_cov = per_class_coverage(m_sets, labels, K);
    const auto l_cov = per_class_coverage(l_sets, labels, K);
    for (std::size_t c = 0; c < K; ++c) {
      mondrian[c].push_back(m_cov.at(c).coverage);
      lac[c].push_back(l_cov.at(c).coverage);
      lac_under[c] += l_cov.at(c).coverage < 1 - alpha ? 1 : 0;
    }
  }
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t c = 0; c < K; ++c) {
    const auto m = testing::mean_se(mondrian[c]);
    const auto l = testing::mean_se(lac[c]);
    pass = pass && m.mean >= 0.895;
    detail << fmt("class %zu: mondrian %.4f, lac %.4f (lac below 0.9 in %d/200)%s", c, m.mean,
                  l.mean, lac_under[c], c + 1 < K ? "; " : "");
  }
  return {pass, detail.str()};
}

ProbabilityGrid random_grid(std::size_t w, std::size_t h, std::size_t bands, std::uint64_t seed,
                            double nodata_fraction) {
  SplitMix64 rng(seed);
  ProbabilityGrid g;
  g.header.width = w;
  g.header.height = h;
  g.header.band_count = bands;
  g.header.band_names = default_class_names(bands);
  const std::size_t n = w * h;
  g.data.assign(n * bands, 0.0f);
  std::vector<double> v(bands);
  for (std::size_t px = 0; px < n; ++px) {
    double total = 0;
    for (auto& x : v) total += (x = std::pow(rng.uniform_open(), 3.0));
    for (std::size_t b = 0; b < bands; ++b) g.data[b * n + px] = static_cast<float>(v[b] / total);
    if (rng.uniform() < nodata_fraction) {
      g.data[rng.below(bands) * n + px] = static_cast<float>(g.header.nodata);
    }
  }
  return g;
}

Outcome raster_equivalence() {
  const fs::path dir = fs::temp_directory_path() /
                       ("cpkit_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  int oracle_mismatch = 0, worker_mismatch = 0, roundtrip_mismatch = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto grid = random_grid(64, 64, 9, derive_seed(8008, s), 0.05);
    const auto model = classifier_from_threshold(0.02 + 0.02 * s, 0.1, default_class_names(9));
    const auto base = apply_classifier_to_grid(model, grid, {.workers = 1});

    const std::size_t n = grid.header.pixel_count();
    for (std::size_t px = 0; px < n; ++px) {
      std::vector<double> v(9);
      bool nodata = false;
      for (std::size_t b = 0; b < 9; ++b) {
        v[b] = grid.at(b, px);
        nodata = nodata || grid.at(b, px) == static_cast<float>(grid.header.nodata);
      }
      std::uint16_t membership = 0;
      std::uint8_t length = kNodataLength;
      if (!nodata) {
        const auto set = predict_set_lac(model, validate_probability_vector(v));
        membership = static_cast<std::uint16_t>(set.membership);
        length = static_cast<std::uint8_t>(set.length);
      }
      oracle_mismatch += base.membership[px] == membership && base.set_length[px] == length ? 0 : 1;
    }
    for (unsigned w : {2U, 8U}) {
      worker_mismatch += apply_classifier_to_grid(model, grid, {.workers = w}) == base ? 0 : 1;
    }
    write_grid(grid, dir / "grid");
    roundtrip_mismatch += read_grid(dir / "grid") == grid ? 0 : 1;
    write_uncertainty_grids(base, dir / "out");
    const auto back = read_uncertainty_grids(dir / "out");
    roundtrip_mismatch +=
        back.membership == base.membership && back.set_length == base.set_length ? 0 : 1;
  }

  // full tile: read, apply with the default pool, write
  const auto tile = random_grid(512, 512, 9, 8009, 0.01);
  write_grid(tile, dir / "tile");
  const auto model = classifier_from_threshold(0.06068, 0.1, default_class_names(9));
  const auto start = std::chrono::steady_clock::now();
  const auto grid = read_grid(dir / "tile");
  const auto out = apply_classifier_to_grid(
      model, grid, {.workers = std::max(1U, std::thread::hardware_concurrency())});
  write_uncertainty_grids(out, dir / "tile_out");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fs::remove_all(dir);

  return {oracle_mismatch == 0 && worker_mismatch == 0 && roundtrip_mismatch == 0 && seconds < 1.0,
          fmt("10 grids 64x64x9: %d oracle mismatches, %d worker mismatches, %d round-trip "
              "mismatches; 512x512x9 read+apply+write %.3f s",
              oracle_mismatch, worker_mismatch, roundtrip_mismatch, seconds)};
}

Outcome end_to_end_pipeline() {
  const std::size_t K = 5, n = 3000, folds = 5;
  const std::vector<double> proportions{0.5, 0.25, 0.25};
  const std::size_t candidates[] = {15, 30, 60};
  std::vector<double> coverage, set_size;
  bool sizes_ok = true;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::uint64_t seed = derive_seed(9009, s);
    auto spec = SyntheticClassSpec::ring(K, 2, 2.0, 1.0, derive_seed(seed, 0));
    const auto data = gen_class_mixture(spec, n);
    const auto split = random_split(n, proportions, derive_seed(seed, 1));
    std::vector<ClassTrainingPoint> train;
    std::vector<const ClassSample*> cal_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (split.partition[i] == 0) train.push_back({data[i].features, data[i].label});
      if (split.partition[i] == 1) cal_rows.push_back(&data[i]);
      if (split.partition[i] == 2) test_rows.push_back(&data[i]);
    }

    // choose k by spatially blocked cross-validation on the training rows
    std::vector<Point2> coords;
    for (const auto& t : train) coords.push_back({t.features[0], t.features[1]});
    const auto cv = spatial_cluster_folds(coords, folds, derive_seed(seed, 2));
    std::size_t best_k = candidates[0];
    double best_brier = kInf;
    for (std::size_t k : candidates) {
      double brier = 0;
      for (std::size_t f = 0; f < folds; ++f) {
        std::vector<ClassTrainingPoint> fit;
        for (std::size_t i = 0; i < train.size(); ++i) {
          if (cv.partition[i] != f) fit.push_back(train[i]);
        }
        for (std::size_t i = 0; i < train.size(); ++i) {
          if (cv.partition[i] != f) continue;
          const auto p = knn_class_probs(fit, train[i].features, std::min(k, fit.size()), K);
          for (std::size_t c = 0; c < K; ++c) {
            const double d = p[c] - (c == train[i].label ? 1.0 : 0.0);
            brier += d * d;
          }
        }
      }
      if (brier < best_brier) {
        best_brier = brier;
        best_k = k;
      }
    }

    std::vector<LabeledExample> cal;
    for (const auto* x : cal_rows) {
      cal.push_back(make_labeled_example(knn_class_probs(train, x->features, best_k, K), x->label));
    }
    const auto model = calibrate_lac(cal, 0.1);
    std::vector<PredictionSet> sets;
    std::vector<std::size_t> labels;
    for (const auto* x : test_rows) {
      sets.push_back(predict_set(model, knn_class_probs(train, x->features, best_k, K)));
      labels.push_back(x->label);
    }
    coverage.push_back(empirical_coverage_sets(sets, labels).coverage);
    const double size = *efficiency_report(sets, K).mean_set_size;
    sizes_ok = sizes_ok && std::isfinite(size) && size < double(K);
    set_size.push_back(size);
  }
  const auto c = testing::mean_se(coverage);
  const auto z = testing::mean_se(set_size);
  return {std::abs(c.mean - 0.90) <= 0.02 && sizes_ok && z.mean < double(K),
          fmt("mean coverage %.4f (se %.4f), mean set size %.3f of K=%zu", c.mean, c.se, z.mean,
              K)};
}

Outcome artifact_round_trip() {
  SplitMix64 rng(10010);
  int mismatches = 0, with_inf = 0, with_mondrian = 0;
  for (int i = 0; i < 100; ++i) {
    ModelArtifact artifact;
    const double alpha = rng.uniform(0.01, 0.5);
    switch (i % 4) {
      case 0:
      case 1: {
        const std::size_t K = 2 + rng.below(15);
        std::vector<std::string> names;
        for (std::size_t c = 0; c < K; ++c) names.push_back("c" + std::to_string(rng.below(1000)) + "_" + std::to_string(c));
        CalibratedClassifier m;
        m.alpha = alpha;
        m.class_names = names;
        m.created_at = i % 3 == 0 ? "" : "2024-06-0" + std::to_string(1 + i % 9) + "T00:00:00Z";
        if (i % 4 == 0) {
          m.method = ClassifierMethod::lac;
          m.n_cal = static_cast<std::int64_t>(rng.below(5000));
          m.insufficient = rng.uniform() < 0.3;
          m.q_hat = m.insufficient ? kInf : rng.uniform();
          m.p_threshold = probability_threshold(*m.q_hat);
        } else {
          m.method = ClassifierMethod::mondrian;
          ++with_mondrian;
          for (std::size_t c = 0; c < K; ++c) {
            ClassCalibration cc;
            cc.n = static_cast<std::int64_t>(rng.below(300));
            cc.insufficient = cc.n == 0 || rng.uniform() < 0.2;
            cc.q_hat = cc.insufficient ? kInf : rng.uniform();
            cc.p_threshold = probability_threshold(cc.q_hat);
            m.per_class.push_back(cc);
            m.n_cal += cc.n;
            m.insufficient = m.insufficient || cc.insufficient;
          }
        }
        artifact = m;
        break;
      }
      default: {
        CalibratedRegressor m;
        m.alpha = alpha;
        m.n_cal = static_cast<std::int64_t>(rng.below(5000));
        m.insufficient = rng.uniform() < 0.3;
        m.q_hat = m.insufficient ? kInf : rng.uniform(-5, 50);
        if (i % 4 == 3) {
          m.method = RegressorMethod::cqr;
          m.quantile_lo_level = alpha / 2;
          m.quantile_hi_level = 1 - alpha / 2;
        }
        artifact = m;
        break;
      }
    }
    const auto text = encode_artifact(artifact);
    with_inf += text.find("\"inf\"") != std::string::npos ? 1 : 0;
    const auto back = decode_artifact(text);
    mismatches += back == artifact && encode_artifact(back) == text ? 0 : 1;
  }
  return {mismatches == 0 && with_inf > 0 && with_mondrian > 0,
          fmt("100 artifacts (%d mondrian, %d with infinite sentinels), %d mismatches",
              with_mondrian, with_inf, mismatches)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "quantile level exactness", 1, quantile_level_table},
      {2, "marginal coverage validity", 120, marginal_coverage},
      {3, "coverage oracle equivalence", 10, rank_enumeration},
      {4, "threshold table shape", 30, threshold_table_shape},
      {5, "CQR validity and adaptivity", 180, cqr_validity_and_adaptivity},
      {6, "nestedness", 5, nestedness},
      {7, "Mondrian per-class coverage", 120, mondrian_per_class},
      {8, "raster oracle equivalence and determinism", 60, raster_equivalence},
      {9, "end-to-end pipeline", 120, end_to_end_pipeline},
      {10, "model artifact round-trip", 1, artifact_round_trip},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name, outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
