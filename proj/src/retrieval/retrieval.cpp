// SPDX-License-Identifier: Apache-2.0
#include "gentool/retrieval/retrieval.hpp"

#include "gentool/error.hpp"
#include "gentool/provider/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace gentool::retrieval {

using core::Json;

ToolIndex::ToolIndex(std::vector<IndexEntry> entries, std::string embedder_id)
    : embedder_id_(std::move(embedder_id)) {
    for (auto& entry : entries) {
        const std::string name = entry.tool.name;
        if (name == core::kSentinelName) throw IndexError("the name " + name + " is reserved");
        if (entries_.empty()) {
            dimension_ = entry.vector.dimension();
        } else if (entry.vector.dimension() != dimension_) {
            throw IndexError("embedding of " + name + " has dimension " + std::to_string(entry.vector.dimension()) +
                             ", index has " + std::to_string(dimension_));
        }
        if (!entries_.emplace(name, std::move(entry)).second) throw IndexError("duplicate tool name " + name);
    }
}

const IndexEntry* ToolIndex::find(std::string_view name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

const IndexEntry& ToolIndex::at(std::string_view name) const {
    if (const auto* entry = find(name)) return *entry;
    throw IndexError("tool " + std::string(name) + " is not indexed");
}

std::string embedding_text(const core::ToolSpec& tool) {
    std::string text = tool.name + "\n" + tool.description;
    for (const auto& p : tool.parameters) text += "\n" + p.description;
    for (const auto& r : tool.returns) text += "\n" + r.description;
    return text;
}

ToolIndex index_tools(const std::vector<core::ToolSpec>& tools, provider::Embedder& embedder, std::size_t jobs) {
    std::set<std::string, std::less<>> names;
    for (const auto& tool : tools) {
        if (tool.name == core::kSentinelName) throw IndexError("the name " + tool.name + " is reserved");
        if (!names.insert(tool.name).second) throw IndexError("duplicate tool name " + tool.name);
    }
    std::vector<IndexEntry> entries(tools.size());
    provider::parallel_for(tools.size(), jobs, [&](std::size_t i) {
        entries[i] = {tools[i], embedder.embed(embedding_text(tools[i]))};
    });
    return ToolIndex(std::move(entries), embedder.backend_id() + "/" + embedder.model_id());
}

std::vector<std::string> rank_distractors(const provider::EmbeddingVector& anchor,
                                          const std::set<std::string, std::less<>>& excluded, const ToolIndex& index,
                                          std::size_t count) {
    std::vector<std::pair<double, const std::string*>> scored;
    scored.reserve(index.size());
    for (const auto& [name, entry] : index.entries()) {
        if (excluded.count(name) != 0) continue;
        scored.emplace_back(provider::cosine(anchor, entry.vector), &name);
    }
    if (scored.size() < count) {
        throw InsufficientCorpusError("need " + std::to_string(count) + " distractors but only " +
                                      std::to_string(scored.size()) + " tools are eligible");
    }
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(count), scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return *a.second < *b.second;
                      });
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(*scored[i].second);
    return out;
}

std::vector<core::ToolSpec> build_toolset(std::string_view query, const std::vector<core::ToolSpec>& required,
                                          const std::set<std::string, std::less<>>& exclusions,
                                          const ToolIndex& index, int k, provider::Embedder* embedder) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (required.size() > static_cast<std::size_t>(k)) {
        throw std::invalid_argument("more required tools than toolset slots");
    }
    std::set<std::string, std::less<>> skip = exclusions;
    std::set<std::string, std::less<>> required_names;
    for (const auto& tool : required) {
        if (tool.name == core::kSentinelName) throw IndexError("the sentinel cannot be a required tool");
        if (!required_names.insert(tool.name).second) throw IndexError("tool " + tool.name + " is required twice");
        skip.insert(tool.name);
    }

    provider::EmbeddingVector anchor;
    if (!required.empty()) {
        if (const auto* entry = index.find(required.front().name)) {
            anchor = entry->vector;
        } else if (embedder != nullptr) {
            anchor = embedder->embed(embedding_text(required.front()));
        } else {
            throw IndexError("tool " + required.front().name + " is not indexed and no embedder was given");
        }
    } else {
        if (embedder == nullptr) throw std::invalid_argument("a toolset without required tools needs an embedder");
        anchor = embedder->embed(query);
    }

    const auto distractors = rank_distractors(anchor, skip, index, static_cast<std::size_t>(k) - required.size());
    std::vector<core::ToolSpec> toolset = required;
    for (const auto& name : distractors) toolset.push_back(index.at(name).tool);
    toolset.push_back(core::sentinel_tool());
    return toolset;
}

std::size_t related_example_count(const std::vector<core::ToolSpec>& train_gold, const core::ToolSpec& test_gold,
                                  const ToolIndex& index, double threshold) {
    if (train_gold.empty()) return 0;
    const auto& test_vector = index.at(test_gold.name).vector;
    std::size_t count = 0;
    for (const auto& tool : train_gold) {
        if (provider::cosine(index.at(tool.name).vector, test_vector) > threshold) ++count;
    }
    return count;
}

Json to_json(const ToolIndex& index) {
    Json entries = Json::array();
    for (const auto& [name, entry] : index.entries()) {
        entries.push_back(Json{{"tool", core::to_json(entry.tool)}, {"vector", entry.vector.values}});
    }
    return Json{{"embedder", index.embedder_id()}, {"dimension", index.dimension()}, {"entries", entries}};
}

ToolIndex index_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
        throw InputError("tool index needs an \"entries\" array");
    }
    std::vector<IndexEntry> entries;
    for (const auto& item : j["entries"]) {
        if (!item.is_object() || !item.contains("tool") || !item.contains("vector") || !item["vector"].is_array()) {
            throw InputError("tool index entry needs \"tool\" and \"vector\"");
        }
        IndexEntry entry;
        entry.tool = core::tool_from_json(item["tool"]);
        for (const auto& x : item["vector"]) {
            if (!x.is_number()) throw InputError("tool index vector holds a non-number");
            entry.vector.values.push_back(x.get<double>());
        }
        entries.push_back(std::move(entry));
    }
    return ToolIndex(std::move(entries), j.value("embedder", std::string()));
}

}  // namespace gentool::retrieval
