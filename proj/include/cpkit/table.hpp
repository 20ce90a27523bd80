#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <cpkit/prediction.hpp>

namespace cpkit {

/// Tab-separated text table with a mandatory header row. Columns are always
/// addressed by name; error messages cite the source, line and column.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> header, std::string source = "<memory>");

  static Table parse(std::string_view text, std::string source);
  static Table read(const std::filesystem::path& path);

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws MissingField when absent.
  std::size_t column(std::string_view name) const;
  /// Names of columns starting with `prefix`, in header order.
  std::vector<std::string> columns_with_prefix(std::string_view prefix) const;

  const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  double number(std::size_t row, std::size_t col) const;
  std::int64_t integer(std::size_t row, std::size_t col) const;

  void add_row(std::vector<std::string> row);
  /// Appends a column, or overwrites it when the name already exists.
  void set_column(const std::string& name, std::vector<std::string> values);
  /// Rows whose `col` equals `value`, in order.
  Table filter(std::size_t col, std::string_view value) const;

 private:
  [[noreturn]] void cell_error(std::size_t row, std::size_t col, std::string_view what) const;

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::string source_ = "<memory>";
};

/// Shortest round-trip decimal form; infinities as "inf" / "-inf".
std::string format_real(double value);

Table set_predictions_table(std::span<const std::string> ids, std::span<const PredictionSet> sets,
                            std::span<const std::string> class_names);
Table interval_predictions_table(std::span<const std::string> ids,
                                 std::span<const PredictionInterval> intervals);

std::vector<PredictionSet> read_set_predictions(const Table& table);
std::vector<PredictionInterval> read_interval_predictions(const Table& table);

}  // namespace cpkit
