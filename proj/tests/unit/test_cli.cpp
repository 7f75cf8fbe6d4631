// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/json.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>

using namespace gentool;
using core::Json;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string command = std::string(GENTOOL_BINARY) + " " + args + " 2>&1";
    Result r;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) return r;
    char buffer[4096];
    std::size_t n = 0;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// seeds -> clusters -> plan -> corpora, all in `dir`.
void pipeline(const std::filesystem::path& dir, int seeds) {
    const std::string o = " --out-dir " + q(dir);
    ASSERT_EQ(run("make-seeds --count " + std::to_string(seeds) + o).code, 0);
    ASSERT_EQ(run("synthesize " + q(dir / "seeds.jsonl") + o).code, 0);
    ASSERT_EQ(run("split " + q(dir / "clusters.jsonl") + o).code, 0);
    const auto r = run("compile " + q(dir / "clusters.jsonl") + " " + q(dir / "split_plan.json") + o);
    ASSERT_EQ(r.code, 0) << r.out;
}

std::string test_corpora(const std::filesystem::path& dir) {
    std::string s;
    for (const char* n : {"seen_q_unseen_t", "seen_q_seen_t", "unseen_q_unseen_t", "unseen_q_seen_t"}) {
        s += " " + q(dir / ("test_" + std::string(n) + ".jsonl"));
    }
    return s;
}

// Predictions equal to the gold target of every test instance.
std::filesystem::path gold_predictions(const std::filesystem::path& dir) {
    std::string lines;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("render_test_", 0) != 0) continue;
        std::istringstream in(support::slurp(entry.path()));
        std::string line;
        while (std::getline(in, line)) {
            const Json row = Json::parse(line);
            lines += core::dump_line(Json{{"instance_id", row["instance_id"]}, {"output", row["gold"]}}) + "\n";
        }
    }
    const auto path = dir / "predictions.jsonl";
    support::spit(path, lines);
    return path;
}

}  // namespace

TEST(Cli, PipelineIsDeterministic) {
    const auto a = support::fresh_dir("cli_a");
    const auto b = support::fresh_dir("cli_b");
    pipeline(a, 12);
    pipeline(b, 12);
    for (const char* f : {"seeds.jsonl", "clusters.jsonl", "split_plan.json", "train.jsonl", "tool_index.json",
                          "test_seen_q_unseen_t.jsonl", "test_unseen_q_seen_t.jsonl"}) {
        EXPECT_EQ(support::slurp(a / f), support::slurp(b / f)) << f;
        EXPECT_FALSE(support::slurp(a / f).empty()) << f;
    }
    std::istringstream in(support::slurp(a / "clusters.jsonl"));
    std::string line;
    int count = 0;
    while (std::getline(in, line)) ++count;
    EXPECT_EQ(count, 12);
}

TEST(Cli, EvaluateAnalyzeStats) {
    const auto dir = support::fresh_dir("cli_eval");
    pipeline(dir, 12);
    const std::string o = " --out-dir " + q(dir);
    ASSERT_EQ(run("render" + test_corpora(dir) + o).code, 0);
    const auto preds = gold_predictions(dir);

    auto r = run("evaluate --predictions " + q(preds) + test_corpora(dir) + o);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("Overall"), std::string::npos);
    const Json report = Json::parse(support::slurp(dir / "report.json"));
    for (const char* m : {"tool_selection", "param_name", "param_value", "format_ok"}) {
        EXPECT_EQ(report["overall"][m].get<double>(), 100.0) << m;
    }

    r = run("analyze --predictions " + q(preds) + test_corpora(dir) + o);
    ASSERT_EQ(r.code, 0) << r.out;
    const Json analysis = Json::parse(support::slurp(dir / "analysis.json"));
    EXPECT_EQ(analysis["rank"]["consistency"].get<double>(), 100.0);

    support::spit(dir / "empty.jsonl", "");
    r = run("stats " + q(dir / "empty.jsonl") + o);
    ASSERT_EQ(r.code, 0) << r.out;
    const Json stats = Json::parse(support::slurp(dir / "stats.json"));
    EXPECT_EQ(stats["empty.jsonl"]["instances"], 0);
    EXPECT_EQ(stats["empty.jsonl"]["mean_input_words"], 0.0);

    support::spit(dir / "none.jsonl", "");
    EXPECT_EQ(run("evaluate --predictions " + q(dir / "none.jsonl") + test_corpora(dir) + o).code, 1);
}

TEST(Cli, MalformedInputs) {
    const auto dir = support::fresh_dir("cli_bad");
    const std::string o = " --out-dir " + q(dir);
    support::spit(dir / "seeds.jsonl", "{not json\n");
    auto r = run("synthesize " + q(dir / "seeds.jsonl") + o);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("line 1"), std::string::npos) << r.out;

    ASSERT_EQ(run("make-seeds --count 3" + o).code, 0);
    ASSERT_EQ(run("synthesize " + q(dir / "seeds.jsonl") + o).code, 0);
    EXPECT_EQ(run("split " + q(dir / "clusters.jsonl") + o).code, 2);

    EXPECT_EQ(run("make-seeds --k 0" + o).code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
    EXPECT_EQ(run("split " + q(dir / "missing.jsonl") + o).code, 2);
}

TEST(Cli, ConfigFileRespected) {
    const auto dir = support::fresh_dir("cli_config");
    const auto out = dir / "elsewhere";
    support::spit(dir / "gentool.toml", "out-dir = \"" + out.string() + "\"\n");
    const auto r = run("--config " + q(dir / "gentool.toml") + " make-seeds --count 2");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(std::filesystem::exists(out / "seeds.jsonl"));
}

TEST(Cli, RemoteFailureExitCode) {
    const auto dir = support::fresh_dir("cli_remote");
    const std::string o = " --out-dir " + q(dir);
    ASSERT_EQ(run("make-seeds --count 1" + o).code, 0);
    const auto r = run("--backend remote --chat-url http://127.0.0.1:1/v1/chat/completions "
                       "--embeddings-url http://127.0.0.1:1/v1/embeddings synthesize " +
                       q(dir / "seeds.jsonl") + o);
    EXPECT_EQ(r.code, 3) << r.out;
}
