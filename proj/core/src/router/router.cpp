// SPDX-License-Identifier: Apache-2.0
#include "langsim/router/router.hpp"

#include <stdexcept>

#include "langsim/router/landscape.hpp"

namespace langsim::router {

AdvanceResult advance(const TypeHierarchy& h, const NavigationState& state, std::string_view text,
                      backend::DecisionBackend& backend) {
    if (!state.valid_in(h)) throw std::invalid_argument("navigation state not valid in hierarchy");

    AdvanceResult result{state, {}, std::nullopt, std::nullopt, false};
    for (;;) {
        const TypeNode& here = h.node(result.state.current);
        if (here.leaf()) {
            result.arrived = here.id;
            return result;
        }
        backend::DecisionRequest req{backend::AgentKind::type, here.children, {std::string(text)},
                                     std::nullopt};
        auto decision = backend.decide(req, h.child_lexicon(here.id));
        if (!decision.selected()) {
            result.hint = h.hint_for(here.id);
            result.filtered = result.descended.empty() && decision.score == 0.0;
            return result;
        }
        result.state.current = decision.label();
        result.state.path.push_back(decision.label());
        result.descended.push_back(decision.label());
    }
}

TypeHierarchy default_hierarchy() { return default_landscape().hierarchy; }

}  // namespace langsim::router
