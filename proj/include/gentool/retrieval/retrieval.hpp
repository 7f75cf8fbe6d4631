// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/json.hpp"
#include "gentool/core/types.hpp"
#include "gentool/provider/provider.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gentool::retrieval {

struct IndexEntry {
    core::ToolSpec tool;
    provider::EmbeddingVector vector;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

// Embedded tool corpus. Immutable once built.
class ToolIndex {
public:
    ToolIndex() = default;
    // Throws IndexError on a duplicate or reserved name or a dimension mismatch.
    ToolIndex(std::vector<IndexEntry> entries, std::string embedder_id);

    [[nodiscard]] const IndexEntry* find(std::string_view name) const;
    [[nodiscard]] const IndexEntry& at(std::string_view name) const;  // IndexError when absent
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] const std::string& embedder_id() const { return embedder_id_; }
    [[nodiscard]] const std::map<std::string, IndexEntry, std::less<>>& entries() const { return entries_; }

    friend bool operator==(const ToolIndex&, const ToolIndex&) = default;

private:
    std::map<std::string, IndexEntry, std::less<>> entries_;
    std::size_t dimension_ = 0;
    std::string embedder_id_;
};

// Text embedded for a tool: name, description, then each parameter
// description and each return description, one per line.
[[nodiscard]] std::string embedding_text(const core::ToolSpec& tool);

// Embeds every tool, fanning out over at most `jobs` concurrent requests.
// Throws IndexError on duplicate names or on the reserved sentinel name.
[[nodiscard]] ToolIndex index_tools(const std::vector<core::ToolSpec>& tools, provider::Embedder& embedder,
                                    std::size_t jobs = provider::kDefaultParallelism);

// Names of the `count` indexed tools most similar to `anchor`, skipping
// `excluded`; ordered by descending cosine, ties by ascending name. Throws
// InsufficientCorpusError when fewer than `count` candidates remain.
[[nodiscard]] std::vector<std::string> rank_distractors(const provider::EmbeddingVector& anchor,
                                                        const std::set<std::string, std::less<>>& excluded,
                                                        const ToolIndex& index, std::size_t count);

// k+1 tools: the required tools in order, the k - |required| nearest
// distractors to the first required tool (to the query when none is
// required), then the sentinel. Required tools missing from the index are
// embedded with `embedder`; the query is embedded only when nothing is
// required, and then `embedder` must be supplied.
[[nodiscard]] std::vector<core::ToolSpec> build_toolset(std::string_view query,
                                                        const std::vector<core::ToolSpec>& required,
                                                        const std::set<std::string, std::less<>>& exclusions,
                                                        const ToolIndex& index, int k = 5,
                                                        provider::Embedder* embedder = nullptr);

inline constexpr double kDefaultRelatednessThreshold = 0.5;

// Number of entries of train_gold whose embedding has cosine strictly greater
// than `threshold` with test_gold's. All tools must be indexed.
[[nodiscard]] std::size_t related_example_count(const std::vector<core::ToolSpec>& train_gold,
                                                const core::ToolSpec& test_gold, const ToolIndex& index,
                                                double threshold = kDefaultRelatednessThreshold);

// Sidecar file form: {"embedder", "dimension", "entries": [{"tool", "vector"}]}.
[[nodiscard]] core::Json to_json(const ToolIndex& index);
[[nodiscard]] ToolIndex index_from_json(const core::Json& j);

}  // namespace gentool::retrieval
