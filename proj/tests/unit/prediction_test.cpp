#include <catch_amalgamated.hpp>

#include <cpkit/prediction.hpp>
#include <cpkit/rng.hpp>

using namespace cpkit;
using Catch::Matchers::WithinAbs;

namespace {

ProbabilityVector pv(std::vector<double> v) { return validate_probability_vector(std::move(v)); }

CalibratedClassifier lac_with_threshold(double p_threshold, std::size_t classes) {
  return classifier_from_threshold(p_threshold, 0.1, default_class_names(classes));
}

ProbabilityVector random_probs(SplitMix64& rng, std::size_t k) {
  std::vector<double> v(k);
  double total = 0;
  for (auto& x : v) {
    x = -std::log(rng.uniform_open());
    total += x;
  }
  for (auto& x : v) x /= total;
  return validate_probability_vector(std::move(v), 1e-9);
}

}  // namespace

TEST_CASE("LAC set examples", "[prediction]") {
  const auto m = lac_with_threshold(0.4, 3);
  auto s = predict_set_lac(m, pv({0.5, 0.3, 0.2}));
  CHECK(s.membership == 0b001);
  CHECK(s.length == 1);

  s = predict_set_lac(m, pv({0.39, 0.38, 0.23}));
  CHECK(s.empty());
  CHECK(s.length == 0);

  // published 0.90-confidence threshold applied to a nine-class pixel
  const auto dw = lac_with_threshold(0.06068, 9);
  s = predict_set_lac(dw, pv({0.5, 0.3, 0.15, 0.05, 0, 0, 0, 0, 0}));
  CHECK(s.length == 3);
  CHECK(s.membership == 0b111);
}

TEST_CASE("LAC threshold comparison is inclusive", "[prediction]") {
  // calibrated q_hat equals the score of a calibration point with p = 0.3
  std::vector<LabeledExample> cal;
  for (double p : {0.3, 0.6, 0.9}) {
    cal.push_back(make_labeled_example(pv({p, 1 - p}), 0));
  }
  const auto m = calibrate_lac(cal, 0.25);  // k = 3 -> q_hat = 1 - 0.3
  CHECK(predict_set_lac(m, pv({0.3, 0.7})).contains(0));
}

TEST_CASE("insufficient calibration yields the full set", "[prediction]") {
  std::vector<LabeledExample> cal{make_labeled_example(pv({0.9, 0.05, 0.05}), 0)};
  const auto m = calibrate_lac(cal, 0.05);
  REQUIRE(m.insufficient);
  CHECK(predict_set_lac(m, pv({1.0, 0.0, 0.0})) == PredictionSet::full(3));
}

TEST_CASE("force_non_empty adds the arg-max class", "[prediction]") {
  const auto m = lac_with_threshold(0.4, 3);
  const auto s = predict_set_lac(m, pv({0.39, 0.38, 0.23}), {.force_non_empty = true});
  CHECK(s.membership == 0b001);
  CHECK(predict_set_lac(m, pv({0.5, 0.3, 0.2}), {.force_non_empty = true}).length == 1);
}

TEST_CASE("class count must match the model", "[prediction]") {
  const auto m = lac_with_threshold(0.4, 3);
  try {
    predict_set_lac(m, pv({0.5, 0.5}));
    FAIL("expected ClassCountMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClassCountMismatch);
  }
}

TEST_CASE("Mondrian set examples", "[prediction]") {
  CalibratedClassifier m;
  m.method = ClassifierMethod::mondrian;
  m.class_names = {"A", "B", "C"};
  m.per_class = {{2, 0.3, 0.7, false}, {2, 0.5, 0.5, false}, {0, kInf, -kInf, true}};

  auto s = predict_set_mondrian(m, pv({0.75, 0.25, 0.0}));
  CHECK(s.contains(0));   // 0.25 <= 0.3
  CHECK(!s.contains(1));  // 0.75 > 0.5
  CHECK(s.contains(2));   // absent class always included

  m.per_class = {{2, 0.3, 0.7, false}, {2, 0.5, 0.5, false}};
  m.class_names = {"A", "B"};
  s = predict_set_mondrian(m, pv({0.75, 0.25}));
  CHECK(s.membership == 0b01);

  CalibratedClassifier boundary;
  boundary.method = ClassifierMethod::mondrian;
  boundary.class_names = {"A", "B"};
  boundary.per_class = {{1, 0.0, 1.0, false}, {1, 0.0, 1.0, false}};
  CHECK(predict_set_mondrian(boundary, pv({1.0, 0.0})).contains(0));

  // the worked example from the calibration tests: q_A = 0.3, q_B = 0.5
  CalibratedClassifier ab;
  ab.method = ClassifierMethod::mondrian;
  ab.class_names = {"A", "B"};
  ab.per_class = {{2, 0.3, 0.7, false}, {2, 0.5, 0.5, false}};
  // p = [0.75, 0.6] is not a probability vector; the rule is per class, so
  // check it through the unchecked entry point.
  const double raw[] = {0.75, 0.6};
  CHECK(predict_set_unchecked(ab, raw).membership == 0b11);
}

TEST_CASE("absolute-residual intervals", "[prediction]") {
  CalibratedRegressor m;
  m.q_hat = 4;
  auto iv = predict_interval_abs(m, 10);
  CHECK(iv.lower == 6);
  CHECK(iv.upper == 14);
  CHECK(iv.width == 8);

  m.q_hat = 0;
  iv = predict_interval_abs(m, 3);
  CHECK(iv.lower == 3);
  CHECK(iv.upper == 3);
  CHECK(iv.width == 0);

  m.q_hat = 2.5;
  iv = predict_interval_abs(m, -1);
  CHECK(iv.lower == -3.5);
  CHECK(iv.upper == 1.5);

  m.q_hat = kInf;
  m.insufficient = true;
  try {
    predict_interval_abs(m, 1.0);
    FAIL("expected InsufficientCalibration");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientCalibration);
  }
}

TEST_CASE("absolute-residual width is constant", "[prediction][property]") {
  CalibratedRegressor m;
  m.q_hat = 1.75;
  SplitMix64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    CHECK(predict_interval_abs(m, rng.uniform(-1e3, 1e3)).width == Catch::Approx(3.5).epsilon(1e-12));
  }
}

TEST_CASE("CQR intervals", "[prediction]") {
  CalibratedRegressor m;
  m.method = RegressorMethod::cqr;
  m.quantile_lo_level = 0.05;
  m.quantile_hi_level = 0.95;

  m.q_hat = 0.3;
  auto iv = predict_interval_cqr(m, 2, 5);
  CHECK_THAT(iv.lower, WithinAbs(1.7, 1e-15));
  CHECK_THAT(iv.upper, WithinAbs(5.3, 1e-15));
  CHECK_THAT(iv.width, WithinAbs(3.6, 1e-14));
  CHECK_FALSE(iv.collapsed);

  m.q_hat = -0.5;
  iv = predict_interval_cqr(m, 2, 5);
  CHECK(iv.lower == 2.5);
  CHECK(iv.upper == 4.5);

  m.q_hat = -2;
  iv = predict_interval_cqr(m, 2, 5);
  CHECK(iv.lower == 3.5);
  CHECK(iv.upper == 3.5);
  CHECK(iv.width == 0);
  CHECK(iv.collapsed);

  CHECK_THROWS_AS(predict_interval_cqr(m, 5, 2), Error);
  m.q_hat = kInf;
  CHECK_THROWS_AS(predict_interval_cqr(m, 2, 5), Error);
}

TEST_CASE("CQR with degenerate bands reduces to absolute residuals", "[prediction][property]") {
  SplitMix64 rng(43);
  std::vector<RegressionExample> band, point;
  for (int i = 0; i < 200; ++i) {
    const double y_hat = rng.uniform(0, 10);
    const double y = y_hat + rng.normal();
    band.push_back({y, {}, y_hat, y_hat, {}});
    point.push_back({y, y_hat, {}, {}, {}});
  }
  const auto cqr = calibrate_cqr(band, 0.1);
  const auto abs = calibrate_abs_regressor(point, 0.1);
  for (int i = 0; i < 100; ++i) {
    const double y_hat = rng.uniform(0, 10);
    const auto a = predict_interval_cqr(cqr, y_hat, y_hat);
    const auto b = predict_interval_abs(abs, y_hat);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
  }
}

TEST_CASE("LAC sets are nested across confidence levels", "[prediction][property]") {
  SplitMix64 rng(47);
  std::vector<LabeledExample> cal;
  for (int i = 0; i < 300; ++i) {
    const auto p = random_probs(rng, 6);
    cal.push_back(make_labeled_example(p, rng.below(6)));
  }
  const double levels[] = {0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
  std::vector<CalibratedClassifier> models;
  for (double c : levels) models.push_back(calibrate_lac(cal, 1.0 - c));
  for (int i = 0; i < 500; ++i) {
    const auto p = random_probs(rng, 6);
    for (std::size_t j = 1; j < models.size(); ++j) {
      const auto smaller = predict_set_lac(models[j - 1], p);
      const auto larger = predict_set_lac(models[j], p);
      CHECK((smaller.membership & ~larger.membership) == 0);
    }
  }
}

TEST_CASE("prediction is repeatable and leaves the model untouched", "[prediction]") {
  SplitMix64 rng(53);
  const auto m = lac_with_threshold(0.2, 4);
  const auto copy = m;
  for (int i = 0; i < 100; ++i) {
    const auto p = random_probs(rng, 4);
    const auto a = predict_set_lac(m, p);
    CHECK(predict_set_lac(m, p) == a);
    CHECK(a.length <= 4);
  }
  CHECK(m == copy);
}
