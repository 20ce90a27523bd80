#include <cpkit/report.hpp>

#include <json.hpp>

#include <cpkit/table.hpp>

namespace cpkit {

using nlohmann::ordered_json;

namespace {

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json real(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

}  // namespace

std::string report_json(const EvaluationReport& r) {
  ordered_json doc;
  doc["method"] = opt(r.method);
  doc["alpha"] = opt(r.alpha);
  doc["n"] = r.coverage.n;
  doc["covered"] = r.coverage.covered;
  doc["coverage"] = r.coverage.coverage;
  doc["standard_error"] = opt(r.coverage.standard_error);
  doc["standard_error_method"] = r.coverage.standard_error ? ordered_json(kStandardErrorMethod)
                                                           : ordered_json(nullptr);
  doc["groups"] = opt(r.group_column);
  doc["group_count"] = opt(r.coverage.group_count);
  ordered_json per_group = ordered_json::object();
  for (const auto& [g, c] : r.coverage.per_group) per_group[g] = c;
  doc["per_group"] = r.group_column ? per_group : ordered_json(nullptr);
  doc["mean_set_size"] = opt(r.efficiency.mean_set_size);
  doc["empty_set_fraction"] = opt(r.efficiency.empty_set_fraction);
  doc["full_set_fraction"] = opt(r.efficiency.full_set_fraction);
  doc["mean_interval_width"] = opt(r.efficiency.mean_interval_width);
  doc["efficiency_standard_error"] = opt(r.efficiency.standard_error);
  if (!r.per_class.empty()) {
    ordered_json per_class = ordered_json::object();
    for (const auto& [name, c] : r.per_class) {
      per_class[name] = {{"n", c.n}, {"covered", c.covered}, {"coverage", c.coverage}};
    }
    doc["per_class_coverage"] = std::move(per_class);
  } else {
    doc["per_class_coverage"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string report_tsv(const EvaluationReport& r) {
  Table t({"metric", "value"});
  auto add = [&](const std::string& k, const std::string& v) { t.add_row({k, v}); };
  if (r.method) add("method", *r.method);
  if (r.alpha) add("alpha", format_real(*r.alpha));
  add("n", std::to_string(r.coverage.n));
  add("covered", std::to_string(r.coverage.covered));
  add("coverage", format_real(r.coverage.coverage));
  if (r.coverage.standard_error) add("standard_error", format_real(*r.coverage.standard_error));
  if (r.group_column) add("groups", *r.group_column);
  if (r.coverage.group_count) add("group_count", std::to_string(*r.coverage.group_count));
  if (r.efficiency.mean_set_size) add("mean_set_size", format_real(*r.efficiency.mean_set_size));
  if (r.efficiency.empty_set_fraction) {
    add("empty_set_fraction", format_real(*r.efficiency.empty_set_fraction));
  }
  if (r.efficiency.full_set_fraction) {
    add("full_set_fraction", format_real(*r.efficiency.full_set_fraction));
  }
  if (r.efficiency.mean_interval_width) {
    add("mean_interval_width", format_real(*r.efficiency.mean_interval_width));
  }
  for (const auto& [name, c] : r.per_class) add("coverage[" + name + "]", format_real(c.coverage));
  return t.to_string();
}

std::string threshold_table_tsv(const ThresholdTable& table) {
  Table t({"confidence", "qHat"});
  for (const auto& row : table.rows) {
    t.add_row({format_real(row.confidence), format_real(row.p_threshold)});
  }
  return t.to_string();
}

std::string threshold_table_json(const ThresholdTable& table) {
  ordered_json doc;
  doc["n_cal"] = table.n_cal;
  doc["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    doc["rows"].push_back({{"confidence", row.confidence},
                           {"alpha", 1.0 - row.confidence},
                           {"q_hat", real(row.q_hat)},
                           {"p_threshold", real(row.p_threshold)}});
  }
  return doc.dump(2) + "\n";
}

std::string grid_summary_json(const GridSummary& s, const std::vector<std::string>& class_names) {
  ordered_json doc;
  doc["valid_pixels"] = s.valid_pixels;
  doc["nodata_pixels"] = s.nodata_pixels;
  doc["mean_set_size"] = opt(s.efficiency.mean_set_size);
  doc["empty_set_fraction"] = opt(s.efficiency.empty_set_fraction);
  doc["full_set_fraction"] = opt(s.efficiency.full_set_fraction);
  ordered_json inclusion = ordered_json::object();
  for (std::size_t c = 0; c < class_names.size() && c < s.class_inclusion.size(); ++c) {
    inclusion[class_names[c]] = s.class_inclusion[c];
  }
  doc["class_inclusion"] = std::move(inclusion);
  return doc.dump(2) + "\n";
}

}  // namespace cpkit
