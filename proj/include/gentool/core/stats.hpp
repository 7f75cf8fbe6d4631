// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/types.hpp"

#include <functional>
#include <span>
#include <string>

namespace gentool::core {

// Produces the model input (prompt) and target (gold) text for an instance.
// The text renderers live above core, so stats take them as a parameter.
struct TextRenderer {
    std::function<std::string(const TrainingInstance&)> input;
    std::function<std::string(const TrainingInstance&)> output;
};

struct CorpusStats {
    std::size_t tool_count = 0;      // distinct toolset names, sentinel excluded
    std::size_t instance_count = 0;
    double mean_input_words = 0.0;
    double mean_output_words = 0.0;

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Word totals are integer sums, so the means do not depend on instance order.
[[nodiscard]] CorpusStats corpus_stats(std::span<const TrainingInstance> corpus, const TextRenderer& renderer);

}  // namespace gentool::core
