#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levspin {

/// Column-oriented numeric table. Headers carry "symbol[unit]" labels.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> headers) : headers_(std::move(headers)) {
    cols_.resize(headers_.size());
  }

  void add_column(const std::string& header) {
    headers_.push_back(header);
    cols_.emplace_back();
  }

  void append_row(const std::vector<double>& row) {
    if (row.size() != cols_.size()) throw std::invalid_argument("Table: row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) cols_[i].push_back(row[i]);
  }

  const std::vector<std::string>& headers() const { return headers_; }
  const std::vector<double>& column(size_t i) const { return cols_.at(i); }
  const std::vector<double>& column(const std::string& header) const {
    for (size_t i = 0; i < headers_.size(); ++i)
      if (headers_[i] == header) return cols_[i];
    throw std::out_of_range("Table: no column '" + header + "'");
  }
  size_t n_cols() const { return cols_.size(); }
  size_t n_rows() const { return cols_.empty() ? 0 : cols_[0].size(); }

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<double>> cols_;
};

namespace csv {

/// RFC-4180 field quoting: quote when a comma, quote or newline is present.
inline std::string escape_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

/// Shortest round-trippable decimal form, deterministic across runs.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write(std::ostream& os, const Table& t) {
  const auto& h = t.headers();
  for (size_t i = 0; i < h.size(); ++i) {
    if (i) os << ',';
    os << escape_field(h[i]);
  }
  os << "\r\n";
  for (size_t r = 0; r < t.n_rows(); ++r) {
    for (size_t c = 0; c < t.n_cols(); ++c) {
      if (c) os << ',';
      os << format_number(t.column(c)[r]);
    }
    os << "\r\n";
  }
}

inline void write_file(const std::string& path, const Table& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write(f, t);
}

}  // namespace csv
}  // namespace levspin
