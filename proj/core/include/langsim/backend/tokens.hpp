// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

namespace langsim::backend {

inline constexpr std::size_t default_token_budget = 4096;

/// ceil(1.3 * whitespace-separated word count). Tokenizer agnostic.
std::size_t estimate_tokens(std::string_view text);

}  // namespace langsim::backend
