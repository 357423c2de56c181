#include "mfaccel/result_table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mfaccel/error.hpp"

namespace mfaccel {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw Error(ErrorCode::InvalidArgument, "table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw Error(ErrorCode::InvalidArgument, "row width " + std::to_string(row.size()) + " != " +
                                                std::to_string(columns_.size()) + " columns");
  for (const auto& c : row)
    if (const double* d = std::get_if<double>(&c); d && !std::isfinite(*d))
      throw Error(ErrorCode::InvalidArgument, "non-finite value in result table");
  rows_.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_)
    if (k == key) {
      v = value;
      return;
    }
  meta_.emplace_back(key, value);
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw Error(ErrorCode::InvalidArgument, "no column named '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const double* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw Error(ErrorCode::InvalidArgument, "column '" + column + "' is not numeric");
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return {buf, end};
}

void ResultTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&os](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) os << format_number(x);
            else os << x;
          },
          row[i]);
    }
    os << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

}  // namespace mfaccel
