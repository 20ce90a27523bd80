#include <cpkit/cli.hpp>

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <cpkit/artifact.hpp>
#include <cpkit/calibration.hpp>
#include <cpkit/evaluation.hpp>
#include <cpkit/prediction.hpp>
#include <cpkit/raster.hpp>
#include <cpkit/report.hpp>
#include <cpkit/rng.hpp>
#include <cpkit/splits.hpp>
#include <cpkit/synthetic.hpp>
#include <cpkit/table.hpp>

namespace cpkit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed command line; exactly one subcommand is active.
struct CommandConfig {
  std::string subcommand;

  // shared paths
  std::string in;
  std::string out;
  std::string model;

  // confidence
  std::optional<double> alpha;
  std::optional<double> confidence;
  std::vector<double> confidences;

  std::string method;
  std::uint64_t seed = 0;
  std::string format;  // empty: the subcommand's default
  std::string created_at;
  double tolerance = kDefaultSumTolerance;
  bool force_non_empty = false;

  // column selection
  std::string partition;
  std::string partition_col = "partition";
  std::string label_col = "label";
  std::string prob_prefix = "prob_";
  std::string y_col = "y";
  std::string y_hat_col = "y_hat";
  std::string q_lo_col = "q_lo";
  std::string q_hi_col = "q_hi";
  std::string id_col = "id";
  std::string group_col;

  // cqr
  std::optional<double> lo_level;
  std::optional<double> hi_level;

  // split
  std::vector<double> proportions;
  std::size_t folds = 0;
  std::vector<std::string> coord_cols;
  std::string split_col;

  // evaluate
  std::string sets;
  std::string intervals;
  std::string labels;
  std::string targets;

  // synth
  std::string kind;
  std::size_t n = 1000;
  std::size_t classes = 5;
  std::size_t dim = 2;
  double radius = 2.0;
  double sigma = 1.0;
  double temperature = 1.0;
  std::vector<double> weights;
  std::size_t groups = 0;
  std::string mean_fn = "sinusoid";
  std::string noise_fn = "increasing";
  double noise_scale = 1.0;
  double x_min = 0.0;
  double x_max = 6.283185307179586;
  std::size_t width = 64;
  std::size_t height = 64;
  double nodata_fraction = 0.0;

  // raster
  std::string grid;
  unsigned workers = 0;
  std::string summary;
};

// ---------------------------------------------------------------------------
// helpers

double resolve_alpha(const CommandConfig& cfg) {
  if (cfg.alpha && cfg.confidence) {
    throw UsageError("--alpha and --confidence are mutually exclusive");
  }
  if (cfg.alpha) {
    if (!(*cfg.alpha > 0.0 && *cfg.alpha < 1.0)) {
      throw UsageError("--alpha must lie in (0,1), got " + format_real(*cfg.alpha));
    }
    return *cfg.alpha;
  }
  if (cfg.confidence) {
    if (!(*cfg.confidence > 0.0 && *cfg.confidence < 1.0)) {
      throw UsageError("--confidence must lie in (0,1), got " + format_real(*cfg.confidence));
    }
    return ConfidenceSpec::from_confidence(*cfg.confidence).alpha();
  }
  throw UsageError("one of --alpha or --confidence is required");
}

std::string report_format(const CommandConfig& cfg, const char* fallback) {
  const std::string format = cfg.format.empty() ? fallback : cfg.format;
  if (format != "json" && format != "tsv") throw UsageError("--format must be json or tsv");
  return format;
}

Table load_rows(const std::string& path, const CommandConfig& cfg) {
  auto table = Table::read(path);
  if (cfg.partition.empty()) return table;
  return table.filter(table.column(cfg.partition_col), cfg.partition);
}

std::vector<std::string> class_names_from(const Table& table, const std::string& prefix) {
  std::vector<std::string> names;
  for (const auto& col : table.columns_with_prefix(prefix)) names.push_back(col.substr(prefix.size()));
  if (names.empty()) {
    throw Error(ErrorCode::MissingField,
                table.source() + ": no probability columns with prefix '" + prefix + "'");
  }
  return names;
}

std::string at_row(const Table& table, std::size_t row) {
  return table.source() + ":" + std::to_string(row + 2);
}

std::vector<ProbabilityVector> probs_from(const Table& table, const std::string& prefix,
                                          double tolerance) {
  std::vector<std::size_t> cols;
  for (const auto& col : table.columns_with_prefix(prefix)) cols.push_back(table.column(col));
  std::vector<ProbabilityVector> out;
  out.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    std::vector<double> values;
    values.reserve(cols.size());
    for (const auto c : cols) values.push_back(table.number(r, c));
    try {
      out.push_back(validate_probability_vector(std::move(values), tolerance));
    } catch (const Error& e) {
      throw Error(e.code(), at_row(table, r) + ": " + e.message());
    }
  }
  return out;
}

std::vector<std::size_t> labels_from(const Table& table, const std::string& label_col,
                                     const std::vector<std::string>& class_names) {
  const auto col = table.column(label_col);
  std::vector<std::size_t> out;
  out.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto& cell = table.cell(r, col);
    const auto by_name = std::find(class_names.begin(), class_names.end(), cell);
    std::int64_t label = 0;
    if (by_name != class_names.end()) {
      label = by_name - class_names.begin();
    } else {
      label = table.integer(r, col);
    }
    if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
      throw Error(ErrorCode::OutOfRange, at_row(table, r) + ": label '" + cell +
                                             "' is not one of " +
                                             std::to_string(class_names.size()) + " classes");
    }
    out.push_back(static_cast<std::size_t>(label));
  }
  return out;
}

std::vector<LabeledExample> labeled_from(const Table& table, const CommandConfig& cfg,
                                         const std::vector<std::string>& class_names) {
  auto probs = probs_from(table, cfg.prob_prefix, cfg.tolerance);
  const auto labels = labels_from(table, cfg.label_col, class_names);
  std::optional<std::size_t> group_col;
  if (!cfg.group_col.empty()) group_col = table.column(cfg.group_col);
  std::vector<LabeledExample> out;
  out.reserve(probs.size());
  for (std::size_t r = 0; r < probs.size(); ++r) {
    std::optional<std::string> group;
    if (group_col) group = table.cell(r, *group_col);
    out.push_back(make_labeled_example(std::move(probs[r]), labels[r], std::move(group)));
  }
  return out;
}

std::vector<RegressionExample> regression_from(const Table& table, const CommandConfig& cfg,
                                               bool need_y, bool need_point, bool need_band) {
  std::optional<std::size_t> y, yhat, lo, hi;
  if (need_y) y = table.column(cfg.y_col);
  if (need_point) yhat = table.column(cfg.y_hat_col);
  if (need_band) {
    lo = table.column(cfg.q_lo_col);
    hi = table.column(cfg.q_hi_col);
  }
  std::vector<RegressionExample> out(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (y) out[r].y = table.number(r, *y);
    if (yhat) out[r].y_hat = table.number(r, *yhat);
    if (lo) out[r].q_lo = table.number(r, *lo);
    if (hi) out[r].q_hi = table.number(r, *hi);
  }
  return out;
}

std::vector<std::string> ids_from(const Table& table, const std::string& id_col) {
  std::vector<std::string> ids(table.row_count());
  const auto col = table.find_column(id_col);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    ids[r] = col ? table.cell(r, *col) : std::to_string(r);
  }
  return ids;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

std::string group_name(std::size_t i, std::size_t n, std::size_t groups) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "group_%03zu", i * groups / n);
  return buf;
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_synth(const CommandConfig& cfg) {
  if (cfg.n == 0) throw UsageError("--n must be positive");
  if (cfg.kind == "class" || cfg.kind == "grid") {
    auto spec = SyntheticClassSpec::ring(cfg.classes, cfg.dim, cfg.radius, cfg.sigma, cfg.seed);
    spec.temperature = cfg.temperature;
    if (!cfg.weights.empty()) spec.weights = cfg.weights;
    const auto names = default_class_names(cfg.classes);

    if (cfg.kind == "grid") {
      ProbabilityGrid grid;
      grid.header = GridHeader{cfg.width, cfg.height, cfg.classes, names, -9999.0};
      const auto pixels = cfg.width * cfg.height;
      const auto samples = gen_class_mixture(spec, pixels);
      SplitMix64 mask_rng(derive_seed(cfg.seed, 1));
      grid.data.assign(pixels * cfg.classes, 0.0F);
      for (std::size_t p = 0; p < pixels; ++p) {
        const bool masked = mask_rng.uniform() < cfg.nodata_fraction;
        for (std::size_t c = 0; c < cfg.classes; ++c) {
          grid.data[c * pixels + p] =
              masked ? -9999.0F : static_cast<float>(samples[p].oracle[c]);
        }
      }
      write_grid(grid, cfg.out);
      return;
    }

    const auto samples = gen_class_mixture(spec, cfg.n);
    std::vector<std::string> header{"id"};
    for (std::size_t j = 0; j < cfg.dim; ++j) header.push_back("x" + std::to_string(j));
    header.push_back("label");
    for (const auto& name : names) header.push_back("prob_" + name);
    if (cfg.groups > 0) header.push_back("group");
    Table table(header, cfg.out);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::vector<std::string> row{std::to_string(i)};
      for (const double x : samples[i].features) row.push_back(format_real(x));
      row.push_back(std::to_string(samples[i].label));
      for (const double p : samples[i].oracle.values()) row.push_back(format_real(p));
      if (cfg.groups > 0) row.push_back(group_name(i, samples.size(), cfg.groups));
      table.add_row(std::move(row));
    }
    table.write(cfg.out);
    return;
  }
  if (cfg.kind == "reg") {
    SyntheticRegSpec spec;
    if (cfg.mean_fn == "sinusoid") spec.mean = MeanFunction::sinusoid;
    else if (cfg.mean_fn == "piecewise_linear") spec.mean = MeanFunction::piecewise_linear;
    else if (cfg.mean_fn == "linear") spec.mean = MeanFunction::linear;
    else throw UsageError("--mean must be sinusoid, piecewise_linear or linear");
    if (cfg.noise_fn == "constant") spec.noise = NoiseFunction::constant;
    else if (cfg.noise_fn == "increasing") spec.noise = NoiseFunction::increasing;
    else throw UsageError("--noise must be constant or increasing");
    spec.noise_scale = cfg.noise_scale;
    spec.x_min = cfg.x_min;
    spec.x_max = cfg.x_max;
    spec.seed = cfg.seed;
    const double lo = cfg.lo_level.value_or(0.05);
    const double hi = cfg.hi_level.value_or(0.95);
    const auto samples = gen_heteroscedastic_reg(spec, cfg.n, lo, hi);
    std::vector<std::string> header{"id", "x", "y", "y_hat", "q_lo", "q_hi"};
    if (cfg.groups > 0) header.push_back("group");
    Table table(header, cfg.out);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      std::vector<std::string> row{std::to_string(i),    format_real(s.x),    format_real(s.y),
                                   format_real(s.mean),  format_real(s.q_lo), format_real(s.q_hi)};
      if (cfg.groups > 0) row.push_back(group_name(i, samples.size(), cfg.groups));
      table.add_row(std::move(row));
    }
    table.write(cfg.out);
    return;
  }
  throw UsageError("--kind must be class, reg or grid");
}

void cmd_split(const CommandConfig& cfg) {
  auto table = Table::read(cfg.in);
  if (cfg.folds > 0) {
    if (!cfg.proportions.empty()) throw UsageError("--folds and --proportions are exclusive");
    if (cfg.coord_cols.size() != 2) throw UsageError("--coord-cols needs exactly two columns");
    const auto cx = table.column(cfg.coord_cols[0]);
    const auto cy = table.column(cfg.coord_cols[1]);
    std::vector<Point2> coords(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      coords[r] = Point2{table.number(r, cx), table.number(r, cy)};
    }
    const auto folds = spatial_cluster_folds(coords, cfg.folds, cfg.seed);
    std::vector<std::string> values;
    for (const auto f : folds.partition) values.push_back(std::to_string(f));
    table.set_column(cfg.split_col.empty() ? "fold" : cfg.split_col, std::move(values));
  } else {
    if (cfg.proportions.empty()) throw UsageError("one of --proportions or --folds is required");
    SplitAssignment split;
    if (!cfg.group_col.empty()) {
      const auto gc = table.column(cfg.group_col);
      std::vector<std::string> groups(table.row_count());
      for (std::size_t r = 0; r < table.row_count(); ++r) groups[r] = table.cell(r, gc);
      split = grouped_split(groups, cfg.proportions, cfg.seed);
    } else {
      split = random_split(table.row_count(), cfg.proportions, cfg.seed);
    }
    std::vector<std::string> values;
    for (const auto p : split.partition) values.push_back(partition_name(split.partition_count(), p));
    table.set_column(cfg.split_col.empty() ? cfg.partition_col : cfg.split_col, std::move(values));
  }
  table.write(cfg.out);
}

void cmd_calibrate(const CommandConfig& cfg) {
  const double alpha = resolve_alpha(cfg);
  const auto table = load_rows(cfg.in, cfg);
  ModelArtifact artifact;
  if (cfg.method == "lac" || cfg.method == "mondrian") {
    const auto names = class_names_from(table, cfg.prob_prefix);
    const auto cal = labeled_from(table, cfg, names);
    artifact = cfg.method == "lac" ? calibrate_lac(cal, alpha, names)
                                   : calibrate_mondrian(cal, alpha, names);
  } else if (cfg.method == "abs") {
    artifact = calibrate_abs_regressor(regression_from(table, cfg, true, true, false), alpha);
  } else if (cfg.method == "cqr") {
    artifact = calibrate_cqr(regression_from(table, cfg, true, false, true), alpha, cfg.lo_level,
                             cfg.hi_level);
  } else {
    throw UsageError("--method must be lac, mondrian, abs or cqr");
  }
  std::visit([&](auto& m) { m.created_at = cfg.created_at; }, artifact);
  if (const auto* m = std::get_if<CalibratedClassifier>(&artifact); m && m->insufficient) {
    std::cerr << "cpkit: warning: calibration set too small for alpha " << alpha
              << "; affected classes always receive full sets\n";
  }
  save_artifact(artifact, cfg.out);
}

void cmd_predict(const CommandConfig& cfg) {
  const auto artifact = load_artifact(cfg.model);
  const auto table = load_rows(cfg.in, cfg);
  const auto ids = ids_from(table, cfg.id_col);
  if (const auto* model = std::get_if<CalibratedClassifier>(&artifact)) {
    const auto names = class_names_from(table, cfg.prob_prefix);
    if (names != model->class_names) {
      throw Error(ErrorCode::ClassMismatch,
                  table.source() + ": probability columns do not match the model's classes");
    }
    const auto probs = probs_from(table, cfg.prob_prefix, cfg.tolerance);
    std::vector<PredictionSet> sets;
    sets.reserve(probs.size());
    for (const auto& p : probs) sets.push_back(predict_set(*model, p, {cfg.force_non_empty}));
    set_predictions_table(ids, sets, model->class_names).write(cfg.out);
    return;
  }
  const auto& model = std::get<CalibratedRegressor>(artifact);
  const bool cqr = model.method == RegressorMethod::cqr;
  const auto rows = regression_from(table, cfg, false, !cqr, cqr);
  std::vector<PredictionInterval> intervals;
  intervals.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    try {
      intervals.push_back(cqr ? predict_interval_cqr(model, *rows[r].q_lo, *rows[r].q_hi)
                              : predict_interval_abs(model, *rows[r].y_hat));
    } catch (const Error& e) {
      throw Error(e.code(), at_row(table, r) + ": " + e.message());
    }
  }
  interval_predictions_table(ids, intervals).write(cfg.out);
}

void cmd_evaluate(const CommandConfig& cfg) {
  if (cfg.sets.empty() == cfg.intervals.empty()) {
    throw UsageError("exactly one of --sets or --intervals is required");
  }
  const auto format = report_format(cfg, "json");

  std::optional<ModelArtifact> artifact;
  if (!cfg.model.empty()) artifact = load_artifact(cfg.model);

  EvaluationReport report;
  if (artifact) {
    std::visit(
        [&](const auto& m) {
          report.method = std::string(to_string(m.method));
          report.alpha = m.alpha;
        },
        *artifact);
  }

  const auto truth_path = cfg.sets.empty() ? cfg.targets : cfg.labels;
  if (truth_path.empty()) {
    throw UsageError(cfg.sets.empty() ? "--targets is required with --intervals"
                                      : "--labels is required with --sets");
  }
  const auto truth = load_rows(truth_path, cfg);
  std::vector<std::string> groups;
  if (!cfg.group_col.empty()) {
    report.group_column = cfg.group_col;
    const auto gc = truth.column(cfg.group_col);
    for (std::size_t r = 0; r < truth.row_count(); ++r) groups.push_back(truth.cell(r, gc));
  }

  if (!cfg.sets.empty()) {
    const auto sets = read_set_predictions(Table::read(cfg.sets));
    std::vector<std::string> names;
    if (artifact && std::holds_alternative<CalibratedClassifier>(*artifact)) {
      names = std::get<CalibratedClassifier>(*artifact).class_names;
    } else if (!truth.columns_with_prefix(cfg.prob_prefix).empty()) {
      names = class_names_from(truth, cfg.prob_prefix);
    } else {
      throw UsageError("class names unknown: pass --model or a labels file with probability columns");
    }
    const auto labels = labels_from(truth, cfg.label_col, names);
    report.coverage = groups.empty() ? empirical_coverage_sets(sets, labels)
                                     : empirical_coverage_sets(sets, labels, groups);
    report.efficiency = efficiency_report(sets, names.size());
    for (const auto& [c, cov] : per_class_coverage(sets, labels, names.size())) {
      report.per_class[names[c]] = cov;
    }
  } else {
    const auto intervals = read_interval_predictions(Table::read(cfg.intervals));
    const auto yc = truth.column(cfg.y_col);
    std::vector<double> ys(truth.row_count());
    for (std::size_t r = 0; r < truth.row_count(); ++r) ys[r] = truth.number(r, yc);
    report.coverage = groups.empty() ? empirical_coverage_intervals(intervals, ys)
                                     : empirical_coverage_intervals(intervals, ys, groups);
    report.efficiency = efficiency_report(intervals);
    if (!groups.empty() && report.coverage.group_count.value_or(0) >= 2) {
      std::vector<double> widths;
      for (const auto& iv : intervals) widths.push_back(iv.width);
      report.efficiency.standard_error = grouped_standard_error(widths, groups).standard_error;
    }
  }
  write_text(cfg.out, format == "json" ? report_json(report) : report_tsv(report));
}

void cmd_sweep(const CommandConfig& cfg) {
  if (cfg.confidences.empty()) throw UsageError("--confidences is required");
  for (const double c : cfg.confidences) {
    if (!(c > 0.0 && c < 1.0)) {
      throw UsageError("--confidences entries must lie in (0,1), got " + format_real(c));
    }
  }
  const auto format = report_format(cfg, "tsv");
  const auto table = load_rows(cfg.in, cfg);
  const auto names = class_names_from(table, cfg.prob_prefix);
  const auto cal = labeled_from(table, cfg, names);
  const auto result = sweep_thresholds(cal, cfg.confidences);
  write_text(cfg.out, format == "tsv" ? threshold_table_tsv(result)
                                          : threshold_table_json(result));
}

void cmd_raster_apply(const CommandConfig& cfg) {
  const auto artifact = load_artifact(cfg.model);
  const auto* model = std::get_if<CalibratedClassifier>(&artifact);
  if (!model) throw Error(ErrorCode::ClassMismatch, cfg.model + ": raster-apply needs a classifier");
  const auto format = report_format(cfg, "json");
  const auto grid = read_grid(cfg.grid);
  ApplyOptions options;
  options.workers = cfg.workers > 0 ? cfg.workers : std::max(1U, std::thread::hardware_concurrency());
  options.tolerance = cfg.tolerance;
  const auto result = apply_classifier_to_grid(*model, grid, options);
  if (result.invalid_pixels > 0) {
    std::cerr << "cpkit: warning: " << result.invalid_pixels
              << " pixels failed probability validation and were written as nodata\n";
  }
  write_uncertainty_grids(result, cfg.out);
  if (!cfg.summary.empty()) {
    const auto summary = summarize_grid(result);
    if (format == "json") {
      write_text(cfg.summary, grid_summary_json(summary, result.class_names));
    } else {
      Table t({"metric", "value"});
      t.add_row({"valid_pixels", std::to_string(summary.valid_pixels)});
      t.add_row({"nodata_pixels", std::to_string(summary.nodata_pixels)});
      t.add_row({"mean_set_size", format_real(*summary.efficiency.mean_set_size)});
      t.add_row({"empty_set_fraction", format_real(*summary.efficiency.empty_set_fraction)});
      t.add_row({"full_set_fraction", format_real(*summary.efficiency.full_set_fraction)});
      for (std::size_t c = 0; c < result.class_names.size(); ++c) {
        t.add_row({"inclusion[" + result.class_names[c] + "]",
                   format_real(summary.class_inclusion[c])});
      }
      t.write(cfg.summary);
    }
  }
}

// ---------------------------------------------------------------------------
// grammar

void add_columns(CLI::App* sub, CommandConfig& cfg) {
  sub->add_option("--partition", cfg.partition, "Only use rows whose partition column equals this");
  sub->add_option("--partition-col", cfg.partition_col, "Partition column name")
      ->capture_default_str();
  sub->add_option("--label-col", cfg.label_col, "Label column")->capture_default_str();
  sub->add_option("--prob-prefix", cfg.prob_prefix, "Prefix of probability columns")
      ->capture_default_str();
  sub->add_option("--y-col", cfg.y_col, "Target column")->capture_default_str();
  sub->add_option("--yhat-col", cfg.y_hat_col, "Point prediction column")->capture_default_str();
  sub->add_option("--lo-col", cfg.q_lo_col, "Lower quantile column")->capture_default_str();
  sub->add_option("--hi-col", cfg.q_hi_col, "Upper quantile column")->capture_default_str();
  sub->add_option("--tolerance", cfg.tolerance, "Probability-sum tolerance")
      ->capture_default_str();
}

void add_confidence(CLI::App* sub, CommandConfig& cfg) {
  auto* a = sub->add_option("--alpha", cfg.alpha, "Tolerated error rate in (0,1)");
  auto* c = sub->add_option("--confidence", cfg.confidence, "Confidence level 1 - alpha");
  a->excludes(c);
}

int dispatch(CLI::App& app, CommandConfig& cfg, const std::function<void()>& parse) {
  try {
    parse();
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  try {
    if (cfg.subcommand == "synth") cmd_synth(cfg);
    else if (cfg.subcommand == "split") cmd_split(cfg);
    else if (cfg.subcommand == "calibrate") cmd_calibrate(cfg);
    else if (cfg.subcommand == "predict") cmd_predict(cfg);
    else if (cfg.subcommand == "evaluate") cmd_evaluate(cfg);
    else if (cfg.subcommand == "sweep") cmd_sweep(cfg);
    else if (cfg.subcommand == "raster-apply") cmd_raster_apply(cfg);
    return kSuccess;
  } catch (const UsageError& e) {
    std::cerr << "cpkit " << cfg.subcommand << ": usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "cpkit " << cfg.subcommand << ": " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "cpkit " << cfg.subcommand << ": internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

int run_app(const std::function<void(CLI::App&)>& parse) {
  CommandConfig cfg;
  CLI::App app{"Conformal prediction toolkit: calibrated prediction sets and intervals", "cpkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset or probability grid");
  synth->add_option("--kind", cfg.kind, "class | reg | grid")->required();
  synth->add_option("--out", cfg.out, "Output table (or grid stem)")->required();
  synth->add_option("--n", cfg.n, "Number of rows")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--classes", cfg.classes, "Class count")->capture_default_str();
  synth->add_option("--dim", cfg.dim, "Feature dimension")->capture_default_str();
  synth->add_option("--radius", cfg.radius, "Distance of class means from the origin")
      ->capture_default_str();
  synth->add_option("--sigma", cfg.sigma, "Within-class standard deviation")
      ->capture_default_str();
  synth->add_option("--temperature", cfg.temperature, "Posterior temperature")
      ->capture_default_str();
  synth->add_option("--weights", cfg.weights, "Class weights")->delimiter(',');
  synth->add_option("--groups", cfg.groups, "Add a group column with this many groups");
  synth->add_option("--mean", cfg.mean_fn, "sinusoid | piecewise_linear | linear")
      ->capture_default_str();
  synth->add_option("--noise", cfg.noise_fn, "constant | increasing")->capture_default_str();
  synth->add_option("--noise-scale", cfg.noise_scale, "Noise scale")->capture_default_str();
  synth->add_option("--x-min", cfg.x_min, "Input range start")->capture_default_str();
  synth->add_option("--x-max", cfg.x_max, "Input range end")->capture_default_str();
  synth->add_option("--lo-level", cfg.lo_level, "Lower oracle quantile level (default 0.05)");
  synth->add_option("--hi-level", cfg.hi_level, "Upper oracle quantile level (default 0.95)");
  synth->add_option("--width", cfg.width, "Grid width")->capture_default_str();
  synth->add_option("--height", cfg.height, "Grid height")->capture_default_str();
  synth->add_option("--nodata-fraction", cfg.nodata_fraction, "Share of nodata pixels")
      ->capture_default_str();

  auto* split = app.add_subcommand("split", "Annotate rows with partitions or spatial folds");
  split->add_option("--in", cfg.in, "Input table")->required();
  split->add_option("--out", cfg.out, "Output table")->required();
  split->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  split->add_option("--proportions", cfg.proportions, "Partition shares summing to 1")
      ->delimiter(',');
  split->add_option("--group-col", cfg.group_col, "Keep each group in one partition");
  split->add_option("--folds", cfg.folds, "Spatial k-means folds");
  split->add_option("--coord-cols", cfg.coord_cols, "Two coordinate columns")->delimiter(',');
  split->add_option("--column", cfg.split_col, "Name of the added column");
  split->add_option("--partition-col", cfg.partition_col, "Partition column name")
      ->capture_default_str();

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate a conformal model artifact");
  calibrate->add_option("--method", cfg.method, "lac | mondrian | abs | cqr")
      ->required()
      ->check(CLI::IsMember({"lac", "mondrian", "abs", "cqr"}));
  calibrate->add_option("--in", cfg.in, "Calibration table")->required();
  calibrate->add_option("--out", cfg.out, "Model artifact (JSON)")->required();
  add_confidence(calibrate, cfg);
  add_columns(calibrate, cfg);
  calibrate->add_option("--lo-level", cfg.lo_level, "CQR lower level (default alpha/2)");
  calibrate->add_option("--hi-level", cfg.hi_level, "CQR upper level (default 1-alpha/2)");
  calibrate->add_option("--created-at", cfg.created_at, "Timestamp stored in the artifact");

  auto* predict = app.add_subcommand("predict", "Apply a model artifact to a table");
  predict->add_option("--model", cfg.model, "Model artifact")->required();
  predict->add_option("--in", cfg.in, "Input table")->required();
  predict->add_option("--out", cfg.out, "Predictions table")->required();
  predict->add_option("--id-col", cfg.id_col, "Instance id column (row number if absent)")
      ->capture_default_str();
  predict->add_flag("--force-non-empty", cfg.force_non_empty,
                    "Add the arg-max class to empty sets");
  add_columns(predict, cfg);

  auto* evaluate = app.add_subcommand("evaluate", "Coverage and efficiency report");
  auto* sets_opt = evaluate->add_option("--sets", cfg.sets, "Set predictions table");
  auto* iv_opt = evaluate->add_option("--intervals", cfg.intervals, "Interval predictions table");
  sets_opt->excludes(iv_opt);
  evaluate->add_option("--labels", cfg.labels, "Table with true labels");
  evaluate->add_option("--targets", cfg.targets, "Table with true targets");
  evaluate->add_option("--model", cfg.model, "Model artifact (adds method and alpha)");
  evaluate->add_option("--group-col", cfg.group_col, "Group column for the standard error");
  evaluate->add_option("--out", cfg.out, "Report file")->required();
  evaluate->add_option("--format", cfg.format, "json (default) | tsv");
  add_columns(evaluate, cfg);

  auto* sweep = app.add_subcommand("sweep", "Threshold table over confidence levels");
  sweep->add_option("--scores", cfg.in, "Calibration table")->required();
  sweep->add_option("--confidences", cfg.confidences, "Confidence levels")
      ->delimiter(',')
      ->required();
  sweep->add_option("--out", cfg.out, "Output table")->required();
  sweep->add_option("--format", cfg.format, "tsv (default) | json");
  add_columns(sweep, cfg);

  auto* raster = app.add_subcommand("raster-apply", "Per-pixel prediction sets for a grid");
  raster->add_option("--model", cfg.model, "Classifier artifact")->required();
  raster->add_option("--grid", cfg.grid, "Input grid stem")->required();
  raster->add_option("--out", cfg.out, "Output stem")->required();
  raster->add_option("--workers", cfg.workers, "Worker threads (default: all cores)");
  raster->add_option("--tolerance", cfg.tolerance, "Probability-sum tolerance")
      ->capture_default_str();
  raster->add_option("--summary", cfg.summary, "Optional summary report");
  raster->add_option("--format", cfg.format, "Summary format json (default) | tsv");

  return dispatch(app, cfg, [&] {
    parse(app);
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  });
}

}  // namespace

int run(int argc, char** argv) {
  return run_app([&](CLI::App& app) { app.parse(argc, argv); });
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  return run_app([&](CLI::App& app) { app.parse(reversed); });
}

}  // namespace cpkit::cli
