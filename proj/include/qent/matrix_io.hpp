#pragma once

// Matrix file format: {"dim": n, "re": [[...n reals] x n], "im": [[...] x n]}.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qent/spectral.hpp"

namespace qent {

/// Throws ParseError on malformed JSON or mismatched shapes.
CMatrix parse_matrix_json(const std::string& text);
CMatrix read_matrix_file(const std::filesystem::path& path);

/// Doubles are written in shortest round-trip form.
std::string format_matrix_json(const CMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);

}  // namespace qent
