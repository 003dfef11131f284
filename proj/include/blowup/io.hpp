#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace blowup::io {

/// Locale-independent rendering with 17 significant digits.
std::string format_double(double x);

/// RFC 4180 style table: header row, comma separated, CRLF-free ('\n') lines.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

  static std::string quote(std::string_view cell);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `contents` to `path` byte for byte. Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace blowup::io
