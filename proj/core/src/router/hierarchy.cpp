// SPDX-License-Identifier: Apache-2.0
#include "langsim/router/hierarchy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace langsim::router {

std::string_view to_string(TypeLevel l) {
    switch (l) {
        case TypeLevel::root: return "root";
        case TypeLevel::scale: return "scale";
        case TypeLevel::functionality: return "functionality";
        case TypeLevel::toolkit: return "toolkit";
        case TypeLevel::subtype: return "subtype";
    }
    return "root";
}

TypeLevel level_from_string(std::string_view s) {
    for (auto l : {TypeLevel::root, TypeLevel::scale, TypeLevel::functionality, TypeLevel::toolkit,
                   TypeLevel::subtype}) {
        if (to_string(l) == s) return l;
    }
    throw std::invalid_argument(fmt::format("unknown level '{}'", s));
}

TypeHierarchy::TypeHierarchy(std::string root, std::map<std::string, TypeNode, std::less<>> nodes)
    : root_(std::move(root)), nodes_(std::move(nodes)) {}

const TypeNode& TypeHierarchy::node(std::string_view id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::out_of_range(fmt::format("unknown type node '{}'", id));
    return it->second;
}

std::vector<std::string> TypeHierarchy::leaves() const {
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes_) {
        if (n.leaf()) out.push_back(id);
    }
    return out;
}

std::vector<std::string> TypeHierarchy::path_to(std::string_view id) const {
    std::vector<std::string> path;
    const TypeNode* n = &node(id);
    for (;;) {
        path.push_back(n->id);
        if (!n->parent) break;
        n = &node(*n->parent);
        if (path.size() > nodes_.size()) throw std::logic_error("cycle in type hierarchy");
    }
    std::reverse(path.begin(), path.end());
    return path;
}

backend::Lexicon TypeHierarchy::child_lexicon(std::string_view id) const {
    const TypeNode& n = node(id);
    backend::Lexicon lex;
    lex.confidence_threshold = n.threshold;
    for (const auto& child : n.children) {
        lex.entries[child] = node(child).phrases;
    }
    return lex;
}

std::string TypeHierarchy::hint_for(std::string_view id) const {
    const TypeNode& n = node(id);
    if (!n.hint.empty()) return n.hint;
    return backend::list_hint(n.children);
}

void TypeHierarchy::validate() const {
    if (!contains(root_)) throw std::invalid_argument(fmt::format("root '{}' is not a node", root_));
    if (node(root_).parent) throw std::invalid_argument("root must not have a parent");

    std::set<std::string> reached;
    std::vector<std::string> stack{root_};
    while (!stack.empty()) {
        std::string id = stack.back();
        stack.pop_back();
        if (!reached.insert(id).second) {
            throw std::invalid_argument(fmt::format("node '{}' is reachable twice", id));
        }
        const TypeNode& n = node(id);
        if (!n.leaf() && n.children.size() < 2) {
            throw std::invalid_argument(
                fmt::format("interior node '{}' needs at least two children", id));
        }
        if (n.leaf() && n.family.empty()) {
            throw std::invalid_argument(fmt::format("leaf '{}' has no family binding", id));
        }
        for (const auto& c : n.children) {
            if (!contains(c)) {
                throw std::invalid_argument(fmt::format("node '{}' lists unknown child '{}'", id, c));
            }
            if (node(c).parent != id) {
                throw std::invalid_argument(
                    fmt::format("child '{}' of '{}' names a different parent", c, id));
            }
            stack.push_back(c);
        }
    }
    if (reached.size() != nodes_.size()) {
        for (const auto& [id, n] : nodes_) {
            if (!reached.contains(id)) {
                throw std::invalid_argument(fmt::format("node '{}' is not under the root", id));
            }
        }
    }
}

NavigationState NavigationState::at_root(const TypeHierarchy& h) {
    return NavigationState{h.root(), {h.root()}};
}

bool NavigationState::valid_in(const TypeHierarchy& h) const {
    if (!h.contains(current)) return false;
    return h.path_to(current) == path;
}

}  // namespace langsim::router
