// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "langsim/registry/registry.hpp"
#include "langsim/router/hierarchy.hpp"

namespace langsim::router {

/// Type hierarchy and simulator registry loaded from one definition file.
struct Landscape {
    TypeHierarchy hierarchy;
    registry::SimulatorRegistry registry;
};

/// Definition-file error with the 1-based line it refers to (0 when the
/// problem is global, e.g. a missing root).
class LandscapeError : public std::runtime_error {
  public:
    LandscapeError(std::string source, std::size_t line, const std::string& message);

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

  private:
    std::string source_;
    std::size_t line_;
};

/// Parses the line-oriented definition format:
///
///     node    <id> <level> <parent|->
///     phrase  <node-id> <weight> <text...>
///     hint    <node-id> <text...>
///     threshold <node-id> <value>
///     bind    <leaf-id> <family-key>
///     tool    <tool-id>
///     param   <tool-id> <name> <number|matrix> <units|-> <interval> <hint...>
///     family  <family-key>
///     variant <family-key> <variant-id> <tool-id> <isotherm|hysteresis-loop> <label...>
///     vphrase <variant-id> <weight> <text...>
///     repeat  <family-key> <weight> <text...>
///
/// `#` starts a comment line. Every structural check reports the line of the
/// offending directive.
Landscape parse_landscape(std::string_view text, std::string source = "<landscape>");
Landscape load_landscape(const std::filesystem::path& path);

/// Text of the bundled definition file.
std::string_view default_landscape_text();
const Landscape& default_landscape();

}  // namespace langsim::router
