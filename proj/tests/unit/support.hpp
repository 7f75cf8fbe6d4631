// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/types.hpp"
#include "gentool/provider/hashing_embedder.hpp"
#include "gentool/provider/mock_generator.hpp"
#include "gentool/retrieval/retrieval.hpp"
#include "gentool/scenarios/scenarios.hpp"
#include "gentool/synthesis/synthesis.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace support {

using namespace gentool;

inline core::ToolSpec tool(const std::string& name, const std::vector<std::string>& params,
                           const std::vector<std::string>& returns = {"result"}) {
    core::ToolSpec t;
    t.name = name;
    t.description = "Tool " + name;
    for (const auto& p : params) t.parameters.push_back({p, "The " + p, "string", true});
    for (const auto& r : returns) t.returns.push_back({r, "The " + r});
    return t;
}

inline std::vector<core::QueryToolCluster> mock_clusters(std::size_t n, std::uint64_t seed) {
    provider::MockGenerator generator(seed);
    synthesis::Synthesizer synthesizer(generator);
    std::vector<core::QueryToolCluster> clusters;
    for (const auto& s : synthesis::mock_seed_corpus(n, seed)) clusters.push_back(synthesizer.build_cluster(s));
    return clusters;
}

struct MockCorpus {
    std::vector<core::QueryToolCluster> clusters;
    scenarios::SplitPlan plan;
    retrieval::ToolIndex index;
    scenarios::ScenarioCorpus corpus;
};

inline MockCorpus mock_corpus(std::size_t n, std::uint64_t seed, int k = 5) {
    MockCorpus m;
    m.clusters = mock_clusters(n, seed);
    m.plan = scenarios::split_clusters(m.clusters, scenarios::kDefaultSplitRatio, seed);
    provider::HashingEmbedder embedder;
    m.index = retrieval::index_tools(scenarios::corpus_tools(m.clusters), embedder, 1);
    m.corpus = scenarios::compile_corpus(m.clusters, m.plan, m.index, embedder, k);
    return m;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("gentool_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace support
