// SPDX-License-Identifier: Apache-2.0
#include "langsim/router/landscape.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace langsim::router {

LandscapeError::LandscapeError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(line ? fmt::format("{}:{}: {}", source, line, message)
                              : fmt::format("{}: {}", source, message)),
      source_(std::move(source)),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Splits off the first whitespace-delimited word of `rest`.
std::string_view next_word(std::string_view& rest) {
    rest = trim(rest);
    std::size_t end = 0;
    while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end]))) ++end;
    std::string_view word = rest.substr(0, end);
    rest = trim(rest.substr(end));
    return word;
}

class Parser {
  public:
    Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    Landscape run() {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text_.size()) {
            std::size_t nl = text_.find('\n', start);
            std::size_t end = nl == std::string_view::npos ? text_.size() : nl;
            ++line_no;
            line_ = line_no;
            directive(trim(text_.substr(start, end - start)));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
        return finish();
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw LandscapeError(source_, line_, msg); }
    [[noreturn]] void fail_at(std::size_t line, const std::string& msg) const {
        throw LandscapeError(source_, line, msg);
    }

    std::string word(std::string_view& rest, const char* what) {
        auto w = next_word(rest);
        if (w.empty()) fail(fmt::format("missing {}", what));
        return std::string(w);
    }

    double number(std::string_view& rest, const char* what) {
        auto w = word(rest, what);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || ptr != w.data() + w.size()) {
            fail(fmt::format("{} '{}' is not a number", what, w));
        }
        return v;
    }

    std::string tail(std::string_view rest, const char* what) {
        rest = trim(rest);
        if (rest.empty()) fail(fmt::format("missing {}", what));
        return std::string(rest);
    }

    backend::Phrase phrase(std::string_view& rest) {
        double w = number(rest, "weight");
        if (!(w > 0.0)) fail("phrase weight must be positive");
        return {tail(rest, "phrase text"), w};
    }

    TypeNode& known_node(const std::string& id) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) fail(fmt::format("unknown node '{}'", id));
        return it->second;
    }

    void directive(std::string_view line) {
        if (line.empty() || line.front() == '#') return;
        std::string_view rest = line;
        std::string kw(next_word(rest));

        if (kw == "node") {
            TypeNode n;
            n.id = word(rest, "node id");
            auto level = word(rest, "level");
            try {
                n.level = level_from_string(level);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            auto parent = word(rest, "parent");
            if (!rest.empty()) fail("unexpected text after node parent");
            if (nodes_.contains(n.id)) fail(fmt::format("duplicate node '{}'", n.id));
            if (parent == "-") {
                if (!root_.empty()) fail(fmt::format("second root '{}' (root is '{}')", n.id, root_));
                root_ = n.id;
            } else {
                auto& p = known_node(parent);
                p.children.push_back(n.id);
                n.parent = parent;
            }
            node_lines_[n.id] = line_;
            nodes_.emplace(n.id, std::move(n));
        } else if (kw == "phrase") {
            auto& n = known_node(word(rest, "node id"));
            n.phrases.push_back(phrase(rest));
        } else if (kw == "hint") {
            auto& n = known_node(word(rest, "node id"));
            n.hint = tail(rest, "hint text");
        } else if (kw == "threshold") {
            auto& n = known_node(word(rest, "node id"));
            n.threshold = number(rest, "threshold");
            if (!(n.threshold > 0.0)) fail("threshold must be positive");
        } else if (kw == "bind") {
            auto id = word(rest, "leaf id");
            auto& n = known_node(id);
            n.family = word(rest, "family key");
            bind_lines_[id] = line_;
        } else if (kw == "tool") {
            registry::ToolFunction t;
            t.id = word(rest, "tool id");
            if (tools_.contains(t.id)) fail(fmt::format("duplicate tool '{}'", t.id));
            tool_lines_[t.id] = line_;
            tools_.emplace(t.id, std::move(t));
        } else if (kw == "param") {
            auto tool_id = word(rest, "tool id");
            auto it = tools_.find(tool_id);
            if (it == tools_.end()) fail(fmt::format("unknown tool '{}'", tool_id));
            registry::ParameterSpec p;
            p.name = word(rest, "parameter name");
            auto fmt_word = word(rest, "format");
            if (fmt_word == "number") {
                p.format = registry::ParamFormat::number;
            } else if (fmt_word == "matrix") {
                p.format = registry::ParamFormat::matrix;
            } else {
                fail(fmt::format("format '{}' is not number or matrix", fmt_word));
            }
            p.units = word(rest, "units");
            if (p.units == "-") p.units.clear();
            auto interval = word(rest, "bounds");
            try {
                p.bounds = registry::Interval::parse(interval);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            p.hint = tail(rest, "parameter hint");
            for (const auto& existing : it->second.parameters) {
                if (existing.name == p.name) fail(fmt::format("duplicate parameter '{}'", p.name));
            }
            it->second.parameters.push_back(std::move(p));
        } else if (kw == "family") {
            auto key = word(rest, "family key");
            if (families_.contains(key)) fail(fmt::format("duplicate family '{}'", key));
            families_[key].leaf_id = key;
            family_lines_[key] = line_;
        } else if (kw == "variant") {
            auto key = word(rest, "family key");
            auto fit = families_.find(key);
            if (fit == families_.end()) fail(fmt::format("unknown family '{}'", key));
            registry::SimulatorVariant v;
            v.id = word(rest, "variant id");
            v.tool_id = word(rest, "tool id");
            if (!tools_.contains(v.tool_id)) fail(fmt::format("unknown tool '{}'", v.tool_id));
            try {
                v.output = registry::output_kind_from_string(word(rest, "output kind"));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            v.output_label = tail(rest, "output label");
            if (variant_family_.contains(v.id)) fail(fmt::format("duplicate variant '{}'", v.id));
            variant_family_[v.id] = key;
            fit->second.variants.push_back(std::move(v));
        } else if (kw == "vphrase") {
            auto id = word(rest, "variant id");
            auto vf = variant_family_.find(id);
            if (vf == variant_family_.end()) fail(fmt::format("unknown variant '{}'", id));
            auto& fam = families_[vf->second];
            for (auto& v : fam.variants) {
                if (v.id == id) v.phrases.push_back(phrase(rest));
            }
        } else if (kw == "repeat") {
            auto key = word(rest, "family key");
            auto fit = families_.find(key);
            if (fit == families_.end()) fail(fmt::format("unknown family '{}'", key));
            fit->second.repeat_phrases.push_back(phrase(rest));
        } else {
            fail(fmt::format("unknown directive '{}'", kw));
        }
    }

    Landscape finish() {
        line_ = 0;
        if (root_.empty()) fail("no root node (a node whose parent is '-')");

        for (auto& [id, n] : nodes_) {
            if (n.leaf() && n.family.empty()) n.family = id;
            if (!n.leaf() && n.children.size() < 2) {
                fail_at(node_lines_[id], fmt::format("interior node '{}' needs at least two children", id));
            }
            if (!n.leaf() && bind_lines_.contains(id)) {
                fail_at(bind_lines_[id], fmt::format("only leaves can bind a family ('{}' has children)", id));
            }
        }
        for (const auto& [key, line] : family_lines_) {
            bool bound = false;
            for (const auto& [id, n] : nodes_) bound = bound || (n.leaf() && n.family == key);
            if (!bound) fail_at(line, fmt::format("family '{}' is not bound to any leaf", key));
        }
        for (const auto& [id, t] : tools_) {
            if (t.parameters.empty()) fail_at(tool_lines_[id], fmt::format("tool '{}' has no parameters", id));
        }

        Landscape out;
        out.hierarchy = TypeHierarchy(root_, nodes_);
        for (auto& [id, t] : tools_) out.registry.add_tool(t);
        for (auto& [key, f] : families_) {
            try {
                registry::SimulatorRegistry probe;
                for (auto& [tid, t] : tools_) probe.add_tool(t);
                probe.add_family(f);
                probe.validate();
            } catch (const std::invalid_argument& e) {
                fail_at(family_lines_[key], e.what());
            }
            out.registry.add_family(f);
        }
        for (const auto& [id, n] : nodes_) {
            if (n.leaf() && !out.registry.has_family(n.family)) {
                out.registry.add_family(registry::SimulatorFamily{n.family, {}, {}});
            }
        }
        try {
            out.hierarchy.validate();
            out.registry.validate();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        return out;
    }

    std::string_view text_;
    std::string source_;
    std::size_t line_ = 0;
    std::string root_;
    std::map<std::string, TypeNode, std::less<>> nodes_;
    std::map<std::string, registry::ToolFunction> tools_;
    std::map<std::string, registry::SimulatorFamily> families_;
    std::map<std::string, std::string> variant_family_;
    std::map<std::string, std::size_t> node_lines_, bind_lines_, tool_lines_, family_lines_;
};

}  // namespace

Landscape parse_landscape(std::string_view text, std::string source) {
    return Parser(text, std::move(source)).run();
}

Landscape load_landscape(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LandscapeError(path.string(), 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_landscape(ss.str(), path.string());
}

const Landscape& default_landscape() {
    static const Landscape landscape = parse_landscape(default_landscape_text(), "default_landscape.txt");
    return landscape;
}

}  // namespace langsim::router
