// json_writer.hpp: deterministic JSON text with 17 significant digits.

#pragma once

#include <ostream>
#include <string>

#include "lgap/cli/config.hpp"

namespace lgap::cli {

/// Shortest-safe "%.17g" rendering; -0 prints as 0, non-finite values as null.
std::string format_double(double v);

/// Pretty-printed with two-space indentation. Arrays of scalars stay on one
/// line. Parsing the text and writing it again reproduces it byte for byte.
void write_json(std::ostream& os, const json& value);
std::string to_json_text(const json& value);

} // namespace lgap::cli
