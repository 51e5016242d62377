// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "langsim/router/landscape.hpp"
#include "langsim/router/router.hpp"

using namespace langsim;
using router::advance;
using router::NavigationState;

namespace {

backend::LexiconBackend lexicon;

const router::Landscape& land() { return router::default_landscape(); }

std::size_t error_line(std::string_view text) {
    try {
        router::parse_landscape(text, "t");
    } catch (const router::LandscapeError& e) {
        CHECK(e.source() == "t");
        return e.line();
    }
    FAIL("expected LandscapeError");
    return 0;
}

constexpr std::string_view tiny = R"(node r root -
hint r pick a or b
node a scale r
phrase a 1 alpha
node b scale r
phrase b 1 beta
tool t
param t x number - [0,1] Send x.
family a
variant a a-v t isotherm thing
vphrase a-v 1 thing
)";

}  // namespace

TEST_SUITE("router_registry") {

TEST_CASE("bundled landscape has the four-level tree") {
    const auto& h = land().hierarchy;
    CHECK(h.root() == "root");
    CHECK(h.node("root").children == std::vector<std::string>{"electronic", "atomistic", "mesoscale", "macroscale"});
    CHECK(h.path_to("2D-LDFT") == std::vector<std::string>{"root", "mesoscale", "sorption", "LDFT", "2D-LDFT"});
    CHECK(h.node("2D-LDFT").level == router::TypeLevel::subtype);
    CHECK(h.node("CGMD").level == router::TypeLevel::toolkit);
    auto leaves = h.leaves();
    CHECK(std::find(leaves.begin(), leaves.end(), "3D-LDFT") != leaves.end());
    CHECK_NOTHROW(h.validate());
    CHECK_NOTHROW(land().registry.validate());
}

TEST_CASE("registry holds the two 2D-LDFT variants over one tool") {
    const auto& reg = land().registry;
    const auto& fam = reg.family("2D-LDFT");
    REQUIRE(fam.variants.size() == 2);
    CHECK(fam.variant_ids() == std::vector<std::string>{"2D-LDFT-isotherm", "2D-LDFT-hysteresis"});
    CHECK(fam.variant("2D-LDFT-hysteresis")->output == registry::OutputKind::hysteresis_loop);
    const auto& tool = reg.tool_for(*fam.variant("2D-LDFT-isotherm"));
    REQUIRE(tool.parameters.size() == 2);
    CHECK(tool.parameters[0].name == "temperature");
    CHECK(tool.parameters[0].bounds.to_string() == "(0, 10000]");
    CHECK(tool.parameters[1].format == registry::ParamFormat::matrix);
    CHECK(reg.family("3D-LDFT").variants.empty());
    CHECK(reg.find_variant("nope") == nullptr);
}

TEST_CASE("intervals parse and test membership") {
    auto i = registry::Interval::parse("(0, 10000]");
    CHECK_FALSE(i.contains(0.0));
    CHECK(i.contains(1e-9));
    CHECK(i.contains(10000.0));
    CHECK_FALSE(i.contains(10000.5));
    CHECK(registry::Interval::parse("[0,1]") == registry::Interval{0, 1, false, false});
    CHECK_THROWS_AS(registry::Interval::parse("0,1"), std::invalid_argument);
    CHECK_THROWS_AS(registry::Interval::parse("[2,1]"), std::invalid_argument);
}

TEST_CASE("one text descends as far as it classifies") {
    auto r = advance(land().hierarchy, NavigationState::at_root(land().hierarchy),
                     "mesoscale water sorption with 2D LDFT", lexicon);
    CHECK(r.descended == std::vector<std::string>{"mesoscale", "sorption", "LDFT", "2D-LDFT"});
    REQUIRE(r.arrived);
    CHECK(*r.arrived == "2D-LDFT");
    CHECK_FALSE(r.hint);
}

TEST_CASE("vague texts stop with the current node's hint") {
    const auto& h = land().hierarchy;
    auto r = advance(h, NavigationState::at_root(h), "I want to simulate something", lexicon);
    CHECK(r.descended.empty());
    REQUIRE(r.hint);
    CHECK(*r.hint == h.hint_for("root"));
    CHECK(r.filtered);
    CHECK(r.state == NavigationState::at_root(h));

    auto partial = advance(h, NavigationState::at_root(h), "capillary condensation in pores", lexicon);
    CHECK(partial.descended == std::vector<std::string>{"mesoscale", "sorption"});
    REQUIRE(partial.hint);
    CHECK(partial.hint->find("LDFT") != std::string::npos);
    CHECK_FALSE(partial.filtered);
    CHECK(partial.state.current == "sorption");

    auto again = advance(h, partial.state, "use LDFT", lexicon);
    CHECK(again.descended == std::vector<std::string>{"LDFT"});
    REQUIRE(again.hint);
    CHECK_FALSE(again.filtered);  // "ldft" is not a child cue, but the score at LDFT is zero
}

TEST_CASE("ambiguous cues do not descend") {
    const auto& h = land().hierarchy;
    auto r = advance(h, NavigationState::at_root(h), "atomistic or mesoscale?", lexicon);
    CHECK(r.descended.empty());
    CHECK(r.hint);
    CHECK_FALSE(r.filtered);
}

TEST_CASE("states from another tree are rejected") {
    NavigationState bogus{"LDFT", {"root", "LDFT"}};
    CHECK_FALSE(bogus.valid_in(land().hierarchy));
    CHECK_THROWS_AS(advance(land().hierarchy, bogus, "2d", lexicon), std::invalid_argument);
}

TEST_CASE("simulator selection and availability") {
    const auto& fam = land().registry.family("2D-LDFT");
    memory::Window w{{1, "compute the adsorption isotherm", false}};
    auto s = registry::select_simulator(fam, w, nullptr, lexicon);
    REQUIRE(s.selected);
    CHECK(*s.selected == "2D-LDFT-isotherm");

    w = {{1, "the hysteresis loop please", false}};
    CHECK(*registry::select_simulator(fam, w, nullptr, lexicon).selected == "2D-LDFT-hysteresis");

    w = {{1, "hello", false}};
    auto none = registry::select_simulator(fam, w, nullptr, lexicon);
    CHECK_FALSE(none.selected);
    CHECK(none.filtered);
    CHECK(none.hint == registry::availability_hint(fam));
    CHECK(none.hint.find("2D-LDFT-isotherm (water adsorption isotherm)") != std::string::npos);

    w = {{1, "isotherm or hysteresis", false}};
    auto tie = registry::select_simulator(fam, w, nullptr, lexicon);
    CHECK_FALSE(tie.selected);
    CHECK_FALSE(tie.filtered);

    auto empty = registry::select_simulator(land().registry.family("3D-LDFT"), w, nullptr, lexicon);
    CHECK_FALSE(empty.selected);
    CHECK(empty.hint.find("No simulators are available for 3D-LDFT") == 0);
}

TEST_CASE("repeat phrases count only with a note of the family") {
    const auto& fam = land().registry.family("2D-LDFT");
    memory::MemoryNote note{"2D-LDFT-hysteresis", {{"temperature", "300"}}, "2026-01-01T00:00:00Z"};
    memory::Window w{{0, note.render(), true}, {5, "rerun at 350 K", false}};
    CHECK_FALSE(registry::select_simulator(fam, {{5, "rerun at 350 K", false}}, nullptr, lexicon).selected);
    auto s = registry::select_simulator(fam, w, &note, lexicon);
    REQUIRE(s.selected);
    CHECK(*s.selected == "2D-LDFT-hysteresis");

    memory::Window only_note{{0, note.render(), true}};
    CHECK_FALSE(registry::select_simulator(fam, only_note, &note, lexicon).selected);
}

TEST_CASE("landscape parsing accepts the minimal file and reports bad lines") {
    auto l = router::parse_landscape(tiny);
    CHECK(l.hierarchy.node("r").children.size() == 2);
    CHECK(l.registry.family("a").variants.size() == 1);
    CHECK(l.registry.family("b").variants.empty());

    CHECK(error_line("node r root -\nfrobnicate x\n") == 2);
    CHECK(error_line("node r root -\nnode a scale nowhere\nnode b scale r\n") == 2);
    CHECK(error_line("node r root -\nnode a scale r\nnode a scale r\n") == 3);
    CHECK(error_line("node r root -\nphrase ghost 1 boo\n") == 2);
    CHECK(error_line("node r root -\nnode a sclae r\n") == 2);
    CHECK(error_line("node r root -\nphrase r x boo\n") == 2);
    CHECK(error_line("tool t\nparam t x vector - [0,1] hint\n") == 2);
    CHECK(error_line("tool t\nparam t x number - 0..1 hint\n") == 2);
    CHECK(error_line("family f\nvariant f v missing isotherm label\n") == 2);
    CHECK(error_line("node r root -\nnode q root -\n") == 2);
    CHECK(error_line("# empty\n") == 0);
}

TEST_CASE("interior nodes need two children") {
    CHECK_THROWS_AS(router::parse_landscape("node r root -\nnode a scale r\n"), router::LandscapeError);
}

}
