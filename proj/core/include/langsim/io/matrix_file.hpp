// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "langsim/ldft/lattice.hpp"

namespace langsim::io {

/// A matrix file could not be read or parsed.
class MatrixFileError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses rows of whitespace- or comma-separated numbers (one row per line,
/// `#` starts a comment) or a single bracketed 2D array.
ldft::PorousMatrix parse_matrix_text(std::string_view text, std::string_view source = "<text>");

ldft::PorousMatrix read_matrix_file(const std::filesystem::path& path);

}  // namespace langsim::io
