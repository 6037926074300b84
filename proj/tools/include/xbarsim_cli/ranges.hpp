#pragma once

#include <string_view>
#include <vector>

namespace xbarsim::cli {

/// Comma-separated items, each a number or an inclusive `start:stop:step`
/// range. Range points are start + k step while within half a step of stop,
/// rounded to 1e-12 so that 0:0.2:0.02 yields 0.02 and not 0.020000000000000004.
/// Throws ConfigError on malformed input.
std::vector<double> parse_real_list(std::string_view text);

/// Same syntax restricted to integers.
std::vector<int> parse_int_list(std::string_view text);

}  // namespace xbarsim::cli
