// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langsim/backend/decision.hpp"
#include "langsim/memory/chat_memory.hpp"

namespace langsim::registry {

enum class ParamFormat { number, matrix };

std::string_view to_string(ParamFormat f);

/// Closed or open interval, used for parameter bounds.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const;
    std::string to_string() const;  ///< e.g. "(0, 10000]"
    /// Parses "(a, b]" style notation; throws std::invalid_argument.
    static Interval parse(std::string_view s);

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct ParameterSpec {
    std::string name;
    ParamFormat format = ParamFormat::number;
    std::string units;
    Interval bounds;  ///< value range for numbers, entry range for matrices
    std::string hint;

    friend bool operator==(const ParameterSpec&, const ParameterSpec&) = default;
};

/// The invariant part of an element tool: its ordered input parameters.
struct ToolFunction {
    std::string id;
    std::vector<ParameterSpec> parameters;

    const ParameterSpec* parameter(std::string_view name) const;
};

enum class OutputKind { isotherm, hysteresis_loop };

std::string_view to_string(OutputKind k);
OutputKind output_kind_from_string(std::string_view s);

/// One input-output customization of a tool function.
struct SimulatorVariant {
    std::string id;
    std::string tool_id;
    OutputKind output = OutputKind::isotherm;
    std::string output_label;  ///< human description of the computed quantity
    std::vector<backend::Phrase> phrases;
};

struct SimulatorFamily {
    std::string leaf_id;
    std::vector<SimulatorVariant> variants;
    /// Extra phrases that re-select the previous run's variant when a memory
    /// note is present ("run it again").
    std::vector<backend::Phrase> repeat_phrases;

    const SimulatorVariant* variant(std::string_view id) const;
    std::vector<std::string> variant_ids() const;
};

class SimulatorRegistry {
  public:
    void add_tool(ToolFunction tool);
    void add_family(SimulatorFamily family);

    const ToolFunction* tool(std::string_view id) const;
    /// Empty family for leaves without simulators.
    const SimulatorFamily& family(std::string_view leaf_id) const;
    bool has_family(std::string_view leaf_id) const;
    const SimulatorVariant* find_variant(std::string_view variant_id) const;
    const ToolFunction& tool_for(const SimulatorVariant& v) const;

    const std::map<std::string, ToolFunction, std::less<>>& tools() const { return tools_; }
    const std::map<std::string, SimulatorFamily, std::less<>>& families() const { return families_; }

    /// Every variant's tool resolves; variant ids are globally unique; all
    /// variants of a family share identical parameter specs; each tool has
    /// at least one uniquely named parameter. Throws std::invalid_argument.
    void validate() const;

  private:
    std::map<std::string, ToolFunction, std::less<>> tools_;
    std::map<std::string, SimulatorFamily, std::less<>> families_;
};

struct SelectionResult {
    std::optional<std::string> selected;
    std::string hint;
    bool filtered = false;  ///< the text carried no cue for any variant
};

/// Availability hint for a family (or for a leaf with none).
std::string availability_hint(const SimulatorFamily& family);

/// LM-Sim: classifies the window's newest text against the family variants.
/// When the window carries a memory note for a variant of this family, the
/// family's repeat phrases count toward that variant.
SelectionResult select_simulator(const SimulatorFamily& family, const memory::Window& window,
                                 const memory::MemoryNote* note, backend::DecisionBackend& backend,
                                 double threshold = 1.0);

/// The built-in 2D-LDFT family plus empty stub families, from the bundled
/// landscape definition.
std::vector<SimulatorFamily> builtin_families();

}  // namespace langsim::registry
