#pragma once

// CSV output: a '#' header line naming the schema and the manifest, any
// further '#' comments, a column row, then data rows. Numbers use the shortest decimal form that
// parses back to the same double.

#include <charconv>
#include <concepts>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gtqa/error.hpp"

namespace gtqa {

inline constexpr int kCsvSchemaVersion = 1;

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw IoError("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

template <std::integral I>
std::string format_number(I x) {
  return std::to_string(x);
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view schema, std::string_view manifest,
            std::vector<std::string> columns)
      : out_(out), columns_(std::move(columns)) {
    out_ << "# schema=" << schema << "/v" << kCsvSchemaVersion << " manifest=" << manifest << '\n';
  }

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  // The column row is written lazily so comments can precede it.
  ~CsvWriter() { flush_columns(); }

  // Extra comment lines (fit windows, options); only valid before the column row.
  void comment(std::string_view text) {
    if (columns_written_) throw IoError("CsvWriter: comments must precede the column row");
    out_ << "# " << text << '\n';
  }

  // Cells are already formatted strings.
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw DimensionMismatch("CsvWriter: row width differs from header");
    flush_columns();
    write_cells(cells);
  }

  void flush_columns() {
    if (columns_written_) return;
    write_cells(columns_);
    columns_written_ = true;
  }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::vector<std::string> columns_;
  bool columns_written_ = false;
};

}  // namespace gtqa
