#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xbarsim::cli {

/// Raised when an output cannot be written or an input cannot be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never sees a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart with linear axes and a legend.
std::string render_svg(const std::vector<Series>& series, std::string_view title,
                       std::string_view x_label, std::string_view y_label);

}  // namespace xbarsim::cli
