#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace bayesmv::cli {

/// Output directory or file could not be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips a double: 17 significant digits.
std::string format_double(double value);

/// Minimal CSV writer with a one-line header. Cells are numbers or plain
/// identifiers, so no quoting is done.
class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string_view>;

  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> columns);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::initializer_list<Cell> cells);
  /// Flushes and throws IoError if any write failed.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Creates `dir` (and parents) if needed; throws IoError when impossible.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace bayesmv::cli
