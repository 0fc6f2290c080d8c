#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fairmdp {

/// Minimal RFC-4180 writer: header row, CRLF line endings, '.' decimal.
/// Doubles are formatted with %.12g so repeated runs of the same binary
/// produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void write(const std::filesystem::path& path) const;

    static std::string format(double value);
    static std::string format(long long value);
    static std::string format(int value) { return format(static_cast<long long>(value)); }

  private:
    std::size_t columns_;
    std::string text_;
};

}  // namespace fairmdp
