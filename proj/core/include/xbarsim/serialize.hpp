#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xbarsim/clements.hpp"
#include "xbarsim/linalg.hpp"
#include "xbarsim/mzi.hpp"
#include "xbarsim/xbar.hpp"

namespace xbarsim {

// JSON interchange. Doubles are written with shortest round-trip precision,
// so a dump followed by a parse reproduces every value bit for bit. Parsers
// throw FormatError on malformed documents and let DomainError /
// DimensionError from the model types through.

/// {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}; "im" may be omitted.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(std::string_view text);

/// {"il_coup_db", "il_ps_db", "il_xi_db", "il_x_db", "alpha_db"}. Missing
/// keys keep their zero default; unknown keys are rejected.
std::string loss_to_json(const LossModel& loss);
LossModel loss_from_json(std::string_view text);

/// {"re": [...], "im": [...]} or a plain array of reals.
std::string vector_to_json(std::span<const Complex> v);
std::vector<Complex> vector_from_json(std::string_view text);

using Device = std::variant<ClementsDevice, XbarDevice>;

std::string device_to_json(const ClementsDevice& device);
std::string device_to_json(const XbarDevice& device);
/// Dispatches on "arch" ("svd-clements" or "xbar").
Device device_from_json(std::string_view text);

}  // namespace xbarsim
