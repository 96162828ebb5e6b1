#include "fvcs/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fvcs/errors.hpp"

namespace fvcs {

void Table::add_row(std::vector<double> values, std::string row_status) {
  if (values.size() != columns.size()) {
    throw DomainError("row width " + std::to_string(values.size()) + " does not match " +
                      std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(values));
  if (!row_status.empty() || !status.empty()) {
    status.resize(rows.size() - 1, "ok");
    status.push_back(row_status.empty() ? "ok" : std::move(row_status));
  }
}

std::size_t Table::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(status.begin(), status.end(), [](const auto& s) { return s != "ok"; }));
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

namespace {

// Status strings may contain commas or quotes.
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  const bool with_status = !t.status.empty();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) os << ',';
    os << t.columns[c];
  }
  if (with_status) os << ",status";
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
      if (c) os << ',';
      os << format_double(t.rows[r][c]);
    }
    if (with_status) os << ',' << quote(r < t.status.size() ? t.status[r] : "ok");
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(out, t);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace fvcs
