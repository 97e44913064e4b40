#include "bayesmv/cli/csv.hpp"

#include <cstdio>
#include <type_traits>

namespace bayesmv::cli {

std::string format_double(double value) {
  char buffer[40];
  const int n = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> columns)
    : path_(path), out_(path, std::ios::out | std::ios::trunc | std::ios::binary),
      columns_(columns.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  bool first = true;
  for (std::string_view c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width does not match header");
  bool first = true;
  for (const Cell& cell : cells) {
    if (!first) out_ << ',';
    first = false;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else {
            out_ << v;
          }
        },
        cell);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  const bool ok = static_cast<bool>(out_);
  out_.close();
  if (!ok) throw IoError("failed writing " + path_.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
  }
}

}  // namespace bayesmv::cli
