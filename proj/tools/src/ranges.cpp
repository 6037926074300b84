#include "xbarsim_cli/ranges.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "xbarsim/errors.hpp"

namespace xbarsim::cli {
namespace {

constexpr double kGrid = 1e12;
constexpr std::size_t kMaxPoints = 1'000'000;

double round_grid(double v) {
  const double r = std::round(v * kGrid) / kGrid;
  return r == 0.0 ? 0.0 : r;
}

double to_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError("malformed number '" + std::string(s) + "' in '" + std::string(whole) +
                      "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void expand_range(std::string_view item, std::string_view whole, std::vector<double>& out) {
  const auto parts = split(item, ':');
  if (parts.size() != 3) {
    throw ConfigError("range '" + std::string(item) + "' must be start:stop:step");
  }
  const double start = to_number(parts[0], whole);
  const double stop = to_number(parts[1], whole);
  const double step = to_number(parts[2], whole);
  if (step <= 0.0) throw ConfigError("range step must be positive in '" + std::string(item) + "'");
  if (stop < start) throw ConfigError("range stop below start in '" + std::string(item) + "'");
  const double count = std::floor((stop - start) / step + 0.5);
  if (count + 1 > static_cast<double>(kMaxPoints)) {
    throw ConfigError("range '" + std::string(item) + "' has too many points");
  }
  for (std::size_t k = 0; k <= static_cast<std::size_t>(count); ++k) {
    out.push_back(round_grid(start + static_cast<double>(k) * step));
  }
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  if (text.empty()) throw ConfigError("empty value list");
  std::vector<double> out;
  for (std::string_view item : split(text, ',')) {
    if (item.find(':') != std::string_view::npos) {
      expand_range(item, text, out);
    } else {
      out.push_back(round_grid(to_number(item, text)));
    }
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_real_list(text)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ConfigError("expected integers in '" + std::string(text) + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace xbarsim::cli
