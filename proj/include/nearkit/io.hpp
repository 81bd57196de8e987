#pragma once

// Matrix CSV files: one matrix row per line, comma separated, no header,
// '.' as decimal point regardless of locale.

#include "nearkit/matlin.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nearkit {

/// General format with 17 significant digits; reads back bit-exactly.
std::string format_double(double v);

/// Shortest text that reads back to the same double.
std::string format_shortest(double v);

/// Throws ParseError (with line) on ragged rows, non-numeric or non-finite
/// tokens, and on empty input.
Matrix parse_matrix(std::istream& in, std::string_view source = "<stream>");
Matrix read_matrix(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const Matrix& M);
void write_matrix(const std::filesystem::path& path, const Matrix& M);

}  // namespace nearkit
