#include <cpkit/table.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cpkit {

Table::Table(std::vector<std::string> header, std::string source)
    : header_(std::move(header)), source_(std::move(source)) {}

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

Table Table::parse(std::string_view text, std::string source) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines.front().empty()) {
    throw Error(ErrorCode::TableParseError, source + ": missing header row");
  }
  Table table(split_tabs(lines.front()), std::move(source));
  for (std::size_t c = 0; c < table.header_.size(); ++c) {
    for (std::size_t d = 0; d < c; ++d) {
      if (table.header_[c] == table.header_[d]) {
        throw Error(ErrorCode::TableParseError,
                    table.source_ + ":1: duplicate column '" + table.header_[c] + "'");
      }
    }
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto row = split_tabs(lines[i]);
    if (row.size() != table.header_.size()) {
      std::ostringstream msg;
      msg << table.source_ << ":" << i + 1 << ": " << row.size() << " fields, header has "
          << table.header_.size();
      throw Error(ErrorCode::TableParseError, msg.str());
    }
    table.rows_.push_back(std::move(row));
  }
  return table;
}

Table Table::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string Table::to_string() const {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += row[i];
    }
    out += '\n';
  };
  append_row(header_);
  for (const auto& r : rows_) append_row(r);
  return out;
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << to_string();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw Error(ErrorCode::MissingField, source_ + ": no column '" + std::string(name) + "'");
}

std::vector<std::string> Table::columns_with_prefix(std::string_view prefix) const {
  std::vector<std::string> out;
  for (const auto& h : header_) {
    if (h.starts_with(prefix)) out.push_back(h);
  }
  return out;
}

void Table::cell_error(std::size_t row, std::size_t col, std::string_view what) const {
  std::ostringstream msg;
  msg << source_ << ":" << row + 2 << ": column '" << header_[col] << "': " << what;
  throw Error(ErrorCode::TableParseError, msg.str());
}

double Table::number(std::size_t row, std::size_t col) const {
  const auto& s = rows_[row][col];
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) cell_error(row, col, "'" + s + "' is not a number");
  return value;
}

std::int64_t Table::integer(std::size_t row, std::size_t col) const {
  const auto& s = rows_[row][col];
  std::int64_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) cell_error(row, col, "'" + s + "' is not an integer");
  return value;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw Error(ErrorCode::TableParseError, source_ + ": row width differs from header");
  }
  rows_.push_back(std::move(row));
}

void Table::set_column(const std::string& name, std::vector<std::string> values) {
  if (values.size() != rows_.size()) {
    throw Error(ErrorCode::LengthMismatch, "column '" + name + "' has the wrong length");
  }
  auto col = find_column(name);
  if (!col) {
    header_.push_back(name);
    for (auto& r : rows_) r.emplace_back();
    col = header_.size() - 1;
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i][*col] = std::move(values[i]);
}

Table Table::filter(std::size_t col, std::string_view value) const {
  Table out(header_, source_);
  for (const auto& r : rows_) {
    if (r[col] == value) out.rows_.push_back(r);
  }
  return out;
}

std::string format_real(double value) {
  if (value == kInf) return "inf";
  if (value == -kInf) return "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Table set_predictions_table(std::span<const std::string> ids, std::span<const PredictionSet> sets,
                            std::span<const std::string> class_names) {
  if (ids.size() != sets.size()) {
    throw Error(ErrorCode::LengthMismatch, "one instance id per prediction set is required");
  }
  Table table({"instance_id", "set_bitmask", "set_length", "included_classes"});
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::string names;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      if (!sets[i].contains(c)) continue;
      if (!names.empty()) names += ';';
      names += class_names[c];
    }
    table.add_row({ids[i], std::to_string(sets[i].membership), std::to_string(sets[i].length),
                   std::move(names)});
  }
  return table;
}

Table interval_predictions_table(std::span<const std::string> ids,
                                 std::span<const PredictionInterval> intervals) {
  if (ids.size() != intervals.size()) {
    throw Error(ErrorCode::LengthMismatch, "one instance id per interval is required");
  }
  Table table({"instance_id", "lower", "upper", "width", "collapsed"});
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    table.add_row({ids[i], format_real(iv.lower), format_real(iv.upper), format_real(iv.width),
                   iv.collapsed ? "true" : "false"});
  }
  return table;
}

std::vector<PredictionSet> read_set_predictions(const Table& table) {
  const auto mask_col = table.column("set_bitmask");
  const auto len_col = table.column("set_length");
  std::vector<PredictionSet> sets;
  sets.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto& s = table.cell(r, mask_col);
    std::uint64_t mask = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), mask);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::TableParseError,
                  table.source() + ":" + std::to_string(r + 2) + ": bad set_bitmask '" + s + "'");
    }
    auto set = PredictionSet::from_membership(mask);
    if (table.integer(r, len_col) != set.length) {
      throw Error(ErrorCode::TableParseError, table.source() + ":" + std::to_string(r + 2) +
                                                  ": set_length disagrees with set_bitmask");
    }
    sets.push_back(set);
  }
  return sets;
}

std::vector<PredictionInterval> read_interval_predictions(const Table& table) {
  const auto lo = table.column("lower");
  const auto hi = table.column("upper");
  const auto width = table.column("width");
  const auto collapsed = table.column("collapsed");
  std::vector<PredictionInterval> out;
  out.reserve(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    out.push_back(PredictionInterval{table.number(r, lo), table.number(r, hi),
                                     table.number(r, width), table.cell(r, collapsed) == "true"});
  }
  return out;
}

}  // namespace cpkit
