// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "langsim/backend/decision.hpp"
#include "langsim/backend/tokens.hpp"

using namespace langsim::backend;

namespace {

Lexicon demo_lexicon() {
    Lexicon lex;
    lex.add("sorption", "sorption");
    lex.add("sorption", "water");
    lex.add("mechanics", "stress");
    lex.add("mechanics", "strain");
    return lex;
}

DecisionRequest request(std::vector<std::string> context) {
    return {AgentKind::type, {"sorption", "mechanics"}, std::move(context), std::nullopt};
}

}  // namespace

TEST_SUITE("backend") {

TEST_CASE("token estimate is 1.3 per whitespace word, rounded up") {
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("   ") == 0);
    CHECK(estimate_tokens("one") == 2);
    CHECK(estimate_tokens("one two three") == 4);
    CHECK(estimate_tokens("a\tb\nc  d e f g h i j") == 13);
    CHECK(default_token_budget == 4096);
}

TEST_CASE("phrase matching is case-insensitive and word bounded") {
    CHECK(contains_phrase("Water SORPTION study", "sorption"));
    CHECK(contains_phrase("use 2D-LDFT", "2d"));
    CHECK_FALSE(contains_phrase("adsorption", "sorption"));
    CHECK_FALSE(contains_phrase("pores", "pore"));
    CHECK(contains_phrase("a hysteresis loop.", "hysteresis loop"));
    CHECK_FALSE(contains_phrase("", "x"));
}

TEST_CASE("unique argmax above threshold selects") {
    auto d = classify(request({"water sorption please"}), demo_lexicon());
    REQUIRE(d.selected());
    CHECK(d.label() == "sorption");
    CHECK(d.score == 2.0);
}

TEST_CASE("ties, misses and sub-threshold scores give hints") {
    auto tie = classify(request({"water under stress"}), demo_lexicon());
    CHECK_FALSE(tie.selected());
    CHECK(tie.score == 1.0);
    CHECK(tie.hint_text() == "Please choose one of: sorption, mechanics.");

    auto miss = classify(request({"hello there"}), demo_lexicon());
    CHECK_FALSE(miss.selected());
    CHECK(miss.score == 0.0);

    auto lex = demo_lexicon();
    lex.confidence_threshold = 2.5;
    CHECK_FALSE(classify(request({"water sorption"}), lex).selected());
}

TEST_CASE("only the newest context text is scored") {
    auto lex = demo_lexicon();
    auto alone = classify(request({"stress test"}), lex);
    auto with_history = classify(request({"water sorption", "more sorption", "stress test"}), lex);
    CHECK(alone.selected() == with_history.selected());
    CHECK(alone.label() == with_history.label());
    CHECK(alone.score == with_history.score);
    CHECK_FALSE(classify(request({}), lex).selected());
}

TEST_CASE("requests are validated") {
    CHECK_THROWS_AS(classify({AgentKind::type, {}, {"x"}, std::nullopt}, {}), std::invalid_argument);
    CHECK_THROWS_AS(classify({AgentKind::type, {"a", "a"}, {"x"}, std::nullopt}, {}), std::invalid_argument);
    CHECK_THROWS_AS(classify({AgentKind::input_state, {"known", "maybe"}, {"x"}, "t"}, {}), std::invalid_argument);
    Lexicon bad;
    bad.add("a", "x", 0.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("lexicon backend decides input state by patterns") {
    LexiconBackend b;
    CHECK(b.pattern_input_state());
}

}
