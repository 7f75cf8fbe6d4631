// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/json.hpp"
#include "gentool/provider/digest.hpp"
#include "gentool/textio/templates.hpp"
#include "gentool/textio/textio.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gentool;
using core::Json;

namespace {

core::TrainingInstance sample_instance() {
    core::TrainingInstance inst;
    inst.id = "c/x";
    inst.query = "Book a table for \"two\" at 7 PM.";
    inst.toolset = {support::tool("book_table", {"party", "time"}), support::tool("find_food", {"cuisine"}),
                    core::sentinel_tool()};
    inst.gold_tool = "book_table";
    inst.gold_call = {"book_table", {{"party", "\"two\""}, {"time", "7 PM"}}};
    inst.rank_label = {"book_table", "generate_response", "find_food"};
    return inst;
}

}  // namespace

TEST(Templates, EmbeddedTextMatchesFilesAndDigests) {
    const auto& files = textio::template_files();
    ASSERT_EQ(files.size(), 5u);
    for (const auto& f : files) {
        EXPECT_EQ(provider::sha256_hex(f.text), f.sha256) << f.file_name;
        EXPECT_EQ(support::slurp(std::filesystem::path(GENTOOL_TEMPLATE_DIR) / std::string(f.file_name)), f.text);
    }
    EXPECT_THROW((void)textio::template_text("nope.txt"), std::out_of_range);
}

TEST(Templates, PlaceholdersPresent) {
    EXPECT_NE(textio::tool_selection_template().find("{input_query}"), std::string_view::npos);
    EXPECT_NE(textio::tool_selection_template().find("{tools}"), std::string_view::npos);
    EXPECT_NE(textio::weak_tool_template().find("{user_query}"), std::string_view::npos);
    EXPECT_NE(textio::weak_tool_template().find("{ex_tools}"), std::string_view::npos);
    EXPECT_NE(textio::query_generation_template().find("{weak}"), std::string_view::npos);
    EXPECT_NE(textio::query_generation_template().find("{strong}"), std::string_view::npos);
    EXPECT_NE(textio::call_annotation_template().find("{query}"), std::string_view::npos);
    const Json demo = Json::parse(textio::annotation_demo_tools());
    EXPECT_TRUE(demo.is_array());
}

TEST(Render, PromptHoldsBothTasksAndOutputStanza) {
    const auto inst = sample_instance();
    const std::string prompt = textio::render_prompt(inst);
    EXPECT_NE(prompt.find("First Task"), std::string::npos);
    EXPECT_NE(prompt.find("Second Task"), std::string::npos);
    EXPECT_NE(prompt.find("{\n    \"The output of the first task\": [],\n    \"The output of the second task\": []\n}"),
              std::string::npos);
    EXPECT_NE(prompt.find("Query: " + inst.query), std::string::npos);
    EXPECT_EQ(prompt.find("{input_query}"), std::string::npos);
    EXPECT_EQ(prompt.find("{tools}"), std::string::npos);
    const auto bundle = textio::prompt_bundle(inst);
    EXPECT_EQ(Json::parse(bundle.toolset_block).size(), 3u);
}

TEST(Render, InvocationEscapesAndSentinel) {
    const core::ToolCall call{"t", {{"a", "say \"hi\"\n"}, {"b", "x"}}};
    EXPECT_EQ(textio::render_invocation(call), R"(t("a"="say \"hi\"\n", "b"="x"))");
    EXPECT_EQ(textio::render_invocation(core::ToolCall::generate_response()), "generate_response()");
    EXPECT_EQ(textio::parse_invocation(textio::render_invocation(call)), call);
}

TEST(Render, GoldRoundTrip) {
    const auto inst = sample_instance();
    const auto gold = textio::render_gold(inst);
    const Json j = Json::parse(gold);
    EXPECT_EQ(j["The output of the first task"], Json(inst.rank_label));
    const auto out = textio::parse_model_output(gold);
    ASSERT_TRUE(out.parse_ok);
    EXPECT_EQ(out.ranking, inst.rank_label);
    EXPECT_EQ(out.invocation, inst.gold_call);
    const auto row = textio::render_row(inst);
    EXPECT_EQ(row["instance_id"], "c/x");
    EXPECT_EQ(row["gold"], gold);
}

TEST(Parse, InvocationGrammar) {
    auto c = textio::parse_invocation("simple_car_rental(carCode='ABC123')");
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (core::ToolCall{"simple_car_rental", {{"carCode", "ABC123"}}}));
    c = textio::parse_invocation(R"("tool_name_1"("p1"="v1", "p2"="v2"))");
    ASSERT_TRUE(c);
    EXPECT_EQ(c->tool_name, "tool_name_1");
    EXPECT_EQ(c->arguments.size(), 2u);
    c = textio::parse_invocation("t(n=3200000, r=-1.5e3)");
    ASSERT_TRUE(c);
    EXPECT_EQ(*c->find_argument("n"), "3200000");
    EXPECT_EQ(*c->find_argument("r"), "-1.5e3");
    c = textio::parse_invocation(R"(t(a="\u00e9\ud83d\ude00", b='it\'s'))");
    ASSERT_TRUE(c);
    EXPECT_EQ(*c->find_argument("a"), "\xc3\xa9\xf0\x9f\x98\x80");
    EXPECT_EQ(*c->find_argument("b"), "it's");
    EXPECT_TRUE(textio::parse_invocation("generate_response()"));
    c = textio::parse_invocation("  t( a = 'x' ,b=\"\\q\" ) ");
    ASSERT_TRUE(c);
    EXPECT_EQ(*c->find_argument("b"), "q");

    for (const char* bad : {"", "t", "t(", "t(a)", "t(a=)", "t(a='x'", "t(a='x' b='y')", "(a='x')", "t(a='x', a='y')",
                            "t(a='x',)", "t(a=bare)", "t(a='x') trailing"}) {
        EXPECT_FALSE(textio::parse_invocation(bad)) << bad;
    }
}

TEST(Parse, MultipleInvocations) {
    const auto calls = textio::parse_invocations("a(x='1'), b(y='2'); c()");
    ASSERT_TRUE(calls);
    EXPECT_EQ(calls->size(), 3u);
    EXPECT_FALSE(textio::parse_invocation("a(x='1') b()"));
    EXPECT_TRUE(textio::same_invocation({"t", {{"a", "1"}, {"b", "2"}}}, {"t", {{"b", "2"}, {"a", "1"}}}));
    EXPECT_FALSE(textio::same_invocation({"t", {{"a", "1"}}}, {"t", {{"a", "2"}}}));
}

TEST(Parse, ModelOutputShapes) {
    const std::string ok = R"j({"The output of the first task": ["t", "generate_response()"], "The output of the second task": ["t(a='1')"]})j";
    auto out = textio::parse_model_output(ok);
    EXPECT_TRUE(out.parse_ok);
    EXPECT_EQ(out.ranking, (std::vector<std::string>{"t", "generate_response"}));

    out = textio::parse_model_output("Sure! Here is my answer:\n```json\n" + ok + "\n```\nHope it helps.");
    EXPECT_TRUE(out.parse_ok);

    out = textio::parse_model_output(
        R"j({"The output of the first task: ": ["t"], "The output of the second task: ": ["t(a='1')"]})j");
    EXPECT_TRUE(out.parse_ok);

    for (const std::string bad :
         {std::string("car_transfer_service {\"pickup_time\": \"noon\"}"),
          std::string(R"j({"The output of the first task": ["t"]})j"),
          std::string(R"j({"The output of the first task": ["t"], "The output of the second task": []})j"),
          std::string(R"j({"The output of the first task": "t", "The output of the second task": ["t()"]})j"),
          std::string(R"j({"The output of the first task": ["t"], "The output of the second task": ["t(a=)"]})j"),
          std::string(R"j({"The output of the first task": ["t"], "The output of the second task": ["t()"], "x": 1})j"),
          std::string(R"j({"first": ["t"], "second": ["t()"]})j")}) {
        out = textio::parse_model_output(bad);
        EXPECT_FALSE(out.parse_ok) << bad;
        EXPECT_EQ(out.raw_text, bad);
    }
}

TEST(Parse, DuplicateCallsCollapse) {
    const std::string same = R"j({"The output of the first task": ["t"], "The output of the second task": ["t(a='1') t(a='1')"]})j";
    EXPECT_TRUE(textio::parse_model_output(same).parse_ok);
    const std::string split = R"j({"The output of the first task": ["t"], "The output of the second task": ["t(a='1')", "t(a='1')"]})j";
    EXPECT_TRUE(textio::parse_model_output(split).parse_ok);
    const std::string differ = R"j({"The output of the first task": ["t"], "The output of the second task": ["t(a='1') t(a='2')"]})j";
    EXPECT_FALSE(textio::parse_model_output(differ).parse_ok);
}

TEST(Parse, RandomBytesNeverThrow) {
    std::mt19937_64 rng(11);
    const std::string seeds[] = {"{\"The output of the first task\": [", "\"The output of the second task\": [\"", "t(a='",
                                 "\\u", "\\ud800", "]", "}", "\"", "'", "(", ")", "=", ","};
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        const std::size_t parts = rng() % 12;
        for (std::size_t p = 0; p < parts; ++p) {
            if (rng() % 2) {
                s += seeds[rng() % std::size(seeds)];
            } else {
                s.push_back(static_cast<char>(rng() % 256));
            }
        }
        EXPECT_NO_THROW((void)textio::parse_model_output(s));
    }
}
