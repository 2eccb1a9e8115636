#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odeclass::cli {

/// Locale-independent formatting with 17 significant digits.
/// Negative zero prints as 0.
std::string format_double(double v);

/// Accumulates comma-separated rows with LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string_view> header);

  void row(std::span<const double> values);
  /// Row with a leading text cell.
  void row(std::string_view label, std::span<const double> values);
  void text_row(std::span<const std::string> cells);

  const std::string& str() const noexcept { return buffer_; }

 private:
  std::string buffer_;
};

/// Writes `content` to `path` through a temporary file in the same directory
/// followed by a rename. Throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace odeclass::cli
