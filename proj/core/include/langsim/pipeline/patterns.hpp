// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "langsim/ldft/lattice.hpp"

namespace langsim::pipeline {

/// Largest accepted matrix side, so a serialized matrix always fits one
/// memory note within the token budget.
inline constexpr std::size_t max_matrix_side = 128;

/// Numeric token grammar: optional sign, digits with optional decimal point
/// (or a leading point), optional exponent `e`/`E` with optional sign and
/// digits. Tokens glued to letters or digits on either side ("2D", "H2O",
/// "300K") are not quantities and are skipped.
inline constexpr const char* number_pattern = R"([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)";

/// First standalone numeric token in `text`, or nullopt.
std::optional<double> extract_number(std::string_view text);

struct NoMatch {
    friend bool operator==(const NoMatch&, const NoMatch&) = default;
};

struct Malformed {
    std::string reason;  ///< "ragged", "range", "syntax" or "size"
    friend bool operator==(const Malformed&, const Malformed&) = default;
};

using MatrixExtraction = std::variant<ldft::PorousMatrix, NoMatch, Malformed>;

/// Finds the first matrix-like span: a bracketed `[[..],[..]]` array, or at
/// least two consecutive lines of whitespace/comma separated numbers.
MatrixExtraction extract_matrix(std::string_view text);

/// Compact bracketed form, shortest round-trip entries: `[[1,0],[0,1]]`.
std::string serialize_matrix(const ldft::PorousMatrix& m);

/// Shortest round-trip decimal text of a number.
std::string format_number(double v);

/// Copy of `text` with every matrix-like span blanked out, so numbers inside
/// a matrix are never read as scalar inputs.
std::string mask_matrix_spans(std::string_view text);

}  // namespace langsim::pipeline
