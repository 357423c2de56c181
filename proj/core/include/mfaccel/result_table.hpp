#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mfaccel {

/// Rectangular table written as CSV with a "# key: value" comment header.
class ResultTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit ResultTable(std::vector<std::string> columns);

  /// Throws InvalidArgument on a width mismatch or a non-finite number.
  void add_row(std::vector<Cell> row);
  void set_meta(const std::string& key, const std::string& value);

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& meta() const noexcept { return meta_; }
  [[nodiscard]] std::size_t column_index(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& column) const;

  void write_csv(std::ostream& os) const;
  [[nodiscard]] std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Shortest text that round-trips the double.
std::string format_number(double v);

}  // namespace mfaccel
