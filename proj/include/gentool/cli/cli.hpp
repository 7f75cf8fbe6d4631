// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/provider/provider.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gentool::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitNoParseablePredictions = 1,
    kExitMalformedInput = 2,
    kExitRemoteFailure = 3,
    kExitSynthesisFailure = 4,
};

struct RunConfig {
    std::string backend = "mock";  // mock | remote
    std::string chat_url;
    std::string embeddings_url;
    std::string model_id = "gpt-4o";
    std::string embedding_model = "text-embedding-3-small";
    std::size_t embedding_dimension = 256;  // offline embedder only
    std::filesystem::path cache_dir;        // empty disables the response cache
    int k = 5;
    double split_ratio = 0.67;
    std::uint64_t seed = 0;
    std::size_t jobs = 4;
    std::filesystem::path out_dir = ".";
    double relatedness_threshold = 0.5;
};

// Throws InputError on k < 1, a ratio outside (0, 1), zero jobs, an unknown
// backend or a remote backend without URLs. Creates out_dir.
void prepare(const RunConfig& config);

// Backends wired from the config, wrapped in the response cache when
// cache_dir is set.
[[nodiscard]] std::shared_ptr<provider::TextGenerator> make_generator(const RunConfig& config);
[[nodiscard]] std::shared_ptr<provider::Embedder> make_embedder(const RunConfig& config);

// seeds.jsonl from the built-in mock catalogue.
int cmd_make_seeds(std::size_t count, const RunConfig& config, std::ostream& out);

// clusters.jsonl (clusters whose quality checks all pass) and quality.jsonl
// (one report per seed).
int cmd_synthesize(const std::filesystem::path& seeds, const RunConfig& config, std::ostream& out);

// split_plan.json.
int cmd_split(const std::filesystem::path& clusters, const RunConfig& config, std::ostream& out);

// train.jsonl, test_<scenario>.jsonl for the four test scenarios, and the
// tool_index.json sidecar.
int cmd_compile(const std::filesystem::path& clusters, const std::filesystem::path& plan, const RunConfig& config,
                std::ostream& out);

// render_<stem>.jsonl per corpus file: instance id, prompt and gold text.
int cmd_render(const std::vector<std::filesystem::path>& corpora, const RunConfig& config, std::ostream& out);

// report.json and report.txt; the table also goes to `out`. Returns
// kExitNoParseablePredictions when no prediction parses.
int cmd_evaluate(const std::vector<std::filesystem::path>& corpora, const std::filesystem::path& predictions,
                 const RunConfig& config, std::ostream& out);

// analysis.json: rank analysis, plus the related-example breakdown when a
// training corpus and tool index are given.
int cmd_analyze(const std::vector<std::filesystem::path>& corpora, const std::filesystem::path& predictions,
                const std::optional<std::filesystem::path>& train,
                const std::optional<std::filesystem::path>& index, const RunConfig& config, std::ostream& out);

// stats.json: tool count, instance count and mean word counts per corpus file.
int cmd_stats(const std::vector<std::filesystem::path>& corpora, const RunConfig& config, std::ostream& out);

// Parses arguments, dispatches and maps exceptions to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gentool::cli
