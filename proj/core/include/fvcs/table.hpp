#pragma once

// Column-oriented numeric table with an optional per-row status column, and a
// byte-stable CSV writer (shortest round-trip float formatting).

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fvcs {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// One entry per row when non-empty: "ok" or a failure description.
  std::vector<std::string> status;

  void add_row(std::vector<double> values, std::string row_status = {});
  std::size_t failed_rows() const;
  /// Index of a column by name; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

/// Shortest decimal string that round-trips to the same double; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t);
void write_csv(const std::filesystem::path& path, const Table& t);

}  // namespace fvcs
