// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/stats.hpp"

#include "gentool/core/text.hpp"

#include <cstdint>
#include <set>

namespace gentool::core {

CorpusStats corpus_stats(std::span<const TrainingInstance> corpus, const TextRenderer& renderer) {
    CorpusStats stats;
    std::set<std::string> tools;
    std::uint64_t input_words = 0;
    std::uint64_t output_words = 0;
    for (const auto& inst : corpus) {
        for (const auto& tool : inst.toolset) {
            if (!tool.is_sentinel()) tools.insert(std::string(trim(tool.name)));
        }
        input_words += word_count(renderer.input(inst));
        output_words += word_count(renderer.output(inst));
    }
    stats.tool_count = tools.size();
    stats.instance_count = corpus.size();
    if (!corpus.empty()) {
        stats.mean_input_words = static_cast<double>(input_words) / static_cast<double>(corpus.size());
        stats.mean_output_words = static_cast<double>(output_words) / static_cast<double>(corpus.size());
    }
    return stats;
}

}  // namespace gentool::core
