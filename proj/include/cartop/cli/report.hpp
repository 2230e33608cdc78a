#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cartop/linalg.hpp"

namespace cartop::cli {

using Json = nlohmann::ordered_json;

/// %.17g, with ".0" appended to integral values so they read back as
/// floating point (keeps -0.0 and integral doubles distinct from integers).
std::string format_double(double x);

/// Deterministic text rendering of `j`: two-space indented objects, arrays of
/// scalars (or of scalar pairs) on one line, doubles via format_double.
std::string to_text(const Json& j);
/// Single-line rendering, used for newline-delimited record streams.
std::string to_line(const Json& j);

Json complex_json(Complex z);
Json matrix_json(const ComplexMatrix& m);

std::string sha256_hex(std::string_view bytes);

}  // namespace cartop::cli
