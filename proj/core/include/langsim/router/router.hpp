// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langsim/backend/decision.hpp"
#include "langsim/router/hierarchy.hpp"

namespace langsim::router {

/// Outcome of feeding one text to the LM-Type chain.
///
/// `descended` lists every node entered, in order. Exactly one of `arrived`
/// and `hint` is set.
struct AdvanceResult {
    NavigationState state;
    std::vector<std::string> descended;
    std::optional<std::string> arrived;  ///< leaf id
    std::optional<std::string> hint;     ///< type-hint text
    bool filtered = false;               ///< text was irrelevant at the first level tried
};

/// Descends greedily while each level classifies the text confidently.
/// Stops at the first hint or on reaching a leaf. A hint never changes the
/// state beyond descents already made by the same text.
AdvanceResult advance(const TypeHierarchy& h, const NavigationState& state, std::string_view text,
                      backend::DecisionBackend& backend);

/// The bundled scale -> functionality -> toolkit -> subtype hierarchy.
TypeHierarchy default_hierarchy();

}  // namespace langsim::router
