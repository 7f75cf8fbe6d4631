// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/json.hpp"
#include "gentool/core/stats.hpp"
#include "gentool/core/text.hpp"
#include "gentool/core/validate.hpp"
#include "gentool/error.hpp"
#include "gentool/textio/textio.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace gentool;
using core::Json;

namespace {

bool has_prefix(const core::Violations& v, std::string_view prefix) {
    for (const auto& m : v) {
        if (m.rfind(prefix, 0) == 0) return true;
    }
    return false;
}

}  // namespace

TEST(Text, TrimAndWhitespace) {
    EXPECT_EQ(core::trim("  a b \n"), "a b");
    EXPECT_EQ(core::trim(""), "");
    EXPECT_EQ(core::normalize_whitespace("  a \t b\n\nc "), "a b c");
    EXPECT_EQ(core::fold_case("AbC\xc3\x89"), "abc\xc3\x89");
}

TEST(Text, WordCountMatchesStreamExtraction) {
    for (const std::string s : {"", "   ", "one", " two  words ", "a\tb\nc  d", "x{\"k\": [1, 2]}"}) {
        EXPECT_EQ(core::word_count(s), oracle::words(s)) << s;
    }
}

TEST(Text, IdentifierTokens) {
    EXPECT_EQ(core::identifier_tokens("apartmentID"), (std::vector<std::string>{"apartment", "id"}));
    EXPECT_EQ(core::identifier_tokens("event_time"), (std::vector<std::string>{"event", "time"}));
    EXPECT_EQ(core::identifier_tokens("model-number.v2"), (std::vector<std::string>{"model", "number", "v2"}));
}

TEST(Text, SameToolNameTrimsButKeepsCase) {
    EXPECT_TRUE(core::same_tool_name(" add_event ", "add_event"));
    EXPECT_FALSE(core::same_tool_name("Add_event", "add_event"));
}

TEST(Text, CodeFences) {
    EXPECT_EQ(core::strip_code_fences("```json\n{\"a\":1}\n```"), "{\"a\":1}");
    EXPECT_EQ(core::strip_code_fences("plain"), "plain");
}

TEST(Text, BalancedBlockIgnoresBracketsInStrings) {
    const auto b = core::first_balanced_block("noise {\"a\": \"}{\", \"b\": [1]} tail }", '{');
    ASSERT_TRUE(b);
    EXPECT_EQ(*b, "{\"a\": \"}{\", \"b\": [1]}");
    EXPECT_FALSE(core::first_balanced_block("{ never closed", '{'));
    EXPECT_FALSE(core::first_balanced_block("none", '['));
    const auto arr = core::first_balanced_block("x [\"a]\", [2]] y", '[');
    ASSERT_TRUE(arr);
    EXPECT_EQ(*arr, "[\"a]\", [2]]");
}

TEST(Text, FillTemplateSinglePass) {
    EXPECT_EQ(core::fill_template("{a} and {b} {json: 1} {a}", {{"a", "{b}"}, {"b", "B"}}), "{b} and B {json: 1} {b}");
}

TEST(Types, SentinelShape) {
    const auto s = core::sentinel_tool();
    EXPECT_EQ(s.name, "generate_response");
    EXPECT_TRUE(s.parameters.empty());
    EXPECT_EQ(s.returns.size(), 1u);
    EXPECT_TRUE(core::validate_tool(s).empty());
    EXPECT_TRUE(core::ToolCall::generate_response().is_sentinel());
}

TEST(Types, ScenarioTags) {
    EXPECT_TRUE(core::is_unseen_tool(core::Scenario::seen_q_unseen_t));
    EXPECT_FALSE(core::is_unseen_query(core::Scenario::seen_q_unseen_t));
    EXPECT_TRUE(core::is_unseen_query(core::Scenario::unseen_q_seen_t));
    EXPECT_FALSE(core::is_unseen_tool(core::Scenario::unseen_q_seen_t));
    for (const auto s : core::kTestScenarios) EXPECT_EQ(core::scenario_from_string(core::to_string(s)), s);
    EXPECT_FALSE(core::scenario_from_string("nope"));
}

TEST(Validate, ToolViolations) {
    auto t = support::tool("a", {"x", "x"});
    EXPECT_TRUE(has_prefix(core::validate_tool(t), "duplicate parameter"));
    t = support::tool("", {"x"});
    EXPECT_TRUE(has_prefix(core::validate_tool(t), "empty name"));
    t = support::tool("a", {"x"}, {});
    EXPECT_TRUE(has_prefix(core::validate_tool(t), "no return fields"));
    EXPECT_TRUE(core::validate_tool(support::tool("ok_tool", {"x", "y"})).empty());
}

TEST(Validate, CallAgainstSchema) {
    const auto t = support::tool("a", {"x"});
    core::ToolCall call{"a", {{"x", "1"}, {"y", "2"}}};
    EXPECT_TRUE(has_prefix(core::validate_call_against(call, t), "argument outside schema"));
    call = {"b", {}};
    EXPECT_TRUE(has_prefix(core::validate_call_against(call, t), "tool mismatch"));
    call = {"a", {{"x", "1"}, {"x", "2"}}};
    EXPECT_TRUE(has_prefix(core::validate_call(call), "duplicate argument"));
}

TEST(Validate, InstanceSizeAndSentinel) {
    core::TrainingInstance inst;
    inst.id = "c/x";
    inst.query = "q";
    for (int i = 0; i < 5; ++i) inst.toolset.push_back(support::tool("t" + std::to_string(i), {"p"}));
    inst.toolset.push_back(core::sentinel_tool());
    inst.gold_tool = "t0";
    inst.gold_call = {"t0", {{"p", "v"}}};
    inst.rank_label = {"t0", "generate_response", "t1", "t2", "t3", "t4"};
    EXPECT_TRUE(core::validate_instance(inst, 5).empty());
    EXPECT_TRUE(has_prefix(core::validate_instance(inst, 4), "toolset size"));
    inst.toolset.pop_back();
    inst.toolset.push_back(support::tool("t5", {"p"}));
    EXPECT_TRUE(has_prefix(core::validate_instance(inst, 5), "sentinel missing from toolset"));
}

TEST(Json, ToolRoundTripKeepsOrder) {
    auto t = support::tool("zeta", {"b", "a", "c"}, {"z", "y"});
    t.parameters[1].required = false;
    t.parameters[2].type = "integer";
    const Json j = core::to_json(t);
    EXPECT_EQ(core::tool_from_json(j), t);
    EXPECT_EQ(j["arguments"]["required"], Json::array({"b", "c"}));
}

TEST(Json, LenientToolForms) {
    const Json j = Json::parse(R"({"name": "market_price_checker", "description": "d",
        "parameters": {"marketType": ["Energy", "Agriculture"], "commodity": "Commodity Name"},
        "returns": {"current_price": "Current Market Price"}})");
    const auto t = core::tool_from_json(j);
    ASSERT_EQ(t.parameters.size(), 2u);
    EXPECT_EQ(t.parameters[0].name, "marketType");
    EXPECT_EQ(t.parameters[1].description, "Commodity Name");
    EXPECT_THROW((void)core::tool_from_json(Json::parse(R"({"description": "no name"})")), InputError);
}

TEST(Json, ClusterAndInstanceRoundTrip) {
    const auto m = support::mock_corpus(8, 3);
    for (const auto& c : m.clusters) EXPECT_EQ(core::cluster_from_json(core::to_json(c)), c);
    for (const auto& inst : m.corpus.train) EXPECT_EQ(core::instance_from_json(core::to_json(inst)), inst);
}

TEST(Json, JsonlErrorsCarryLineNumbers) {
    const auto dir = support::fresh_dir("core_jsonl");
    support::spit(dir / "bad.jsonl", "{\"a\": 1}\n\n{broken\n");
    try {
        core::for_each_jsonl(dir / "bad.jsonl", [](const Json&, std::size_t) {});
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW((void)core::read_instances(dir / "missing.jsonl"), InputError);
}

TEST(Stats, EmptyCorpusIsZero) {
    const auto stats = core::corpus_stats({}, textio::text_renderer());
    EXPECT_EQ(stats, core::CorpusStats{});
}

TEST(Stats, MatchesIndependentRecount) {
    const auto m = support::mock_corpus(8, 5);
    const auto& train = m.corpus.train;
    const auto stats = core::corpus_stats(train, textio::text_renderer());
    std::set<std::string> names;
    std::size_t in = 0;
    std::size_t out = 0;
    for (const auto& inst : train) {
        for (const auto& t : inst.toolset) {
            if (t.name != "generate_response") names.insert(t.name);
        }
        in += oracle::words(textio::render_prompt(inst));
        out += oracle::words(textio::render_gold(inst));
    }
    EXPECT_EQ(stats.tool_count, names.size());
    EXPECT_EQ(stats.instance_count, train.size());
    EXPECT_DOUBLE_EQ(stats.mean_input_words, static_cast<double>(in) / static_cast<double>(train.size()));
    EXPECT_DOUBLE_EQ(stats.mean_output_words, static_cast<double>(out) / static_cast<double>(train.size()));
}
