// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langsim/backend/decision.hpp"

namespace langsim::router {

/// Category a node represents. The root is the scale-categorizing agent.
enum class TypeLevel { root, scale, functionality, toolkit, subtype };

std::string_view to_string(TypeLevel l);
TypeLevel level_from_string(std::string_view s);

struct TypeNode {
    std::string id;
    TypeLevel level = TypeLevel::root;
    std::optional<std::string> parent;
    std::vector<std::string> children;
    /// Phrases that select this node among its siblings.
    std::vector<backend::Phrase> phrases;
    /// Shown when the text cannot pick one of the children.
    std::string hint;
    /// Registry key of the simulator family bound to a leaf.
    std::string family;
    /// Score required to descend from this node.
    double threshold = 1.0;

    bool leaf() const { return children.empty(); }
};

class TypeHierarchy {
  public:
    TypeHierarchy() = default;
    TypeHierarchy(std::string root, std::map<std::string, TypeNode, std::less<>> nodes);

    const std::string& root() const { return root_; }
    const TypeNode& node(std::string_view id) const;
    bool contains(std::string_view id) const { return nodes_.find(id) != nodes_.end(); }
    const std::map<std::string, TypeNode, std::less<>>& nodes() const { return nodes_; }

    std::vector<std::string> leaves() const;
    /// Root-to-node chain of ids.
    std::vector<std::string> path_to(std::string_view id) const;
    /// Lexicon over the children of `id`, keyed by child id.
    backend::Lexicon child_lexicon(std::string_view id) const;
    std::string hint_for(std::string_view id) const;

    /// Tree shape, resolvable references, >= 2 children per interior node
    /// and a family binding per leaf. Throws std::invalid_argument.
    void validate() const;

  private:
    std::string root_;
    std::map<std::string, TypeNode, std::less<>> nodes_;
};

struct NavigationState {
    std::string current;
    std::vector<std::string> path;  ///< root .. current

    static NavigationState at_root(const TypeHierarchy& h);
    bool valid_in(const TypeHierarchy& h) const;

    friend bool operator==(const NavigationState&, const NavigationState&) = default;
};

}  // namespace langsim::router
