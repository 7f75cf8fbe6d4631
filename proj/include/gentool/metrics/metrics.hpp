// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/json.hpp"
#include "gentool/core/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gentool::metrics {

// Unicode scalar values of a UTF-8 string. Bytes that do not start a valid
// sequence map to 0xDC00 + byte (never a scalar value), one per byte, so any
// input decodes and distinct inputs stay distinct.
[[nodiscard]] std::u32string decode_utf8(std::string_view text);

// Edit distance (insert, delete, substitute; unit costs) over scalar values.
[[nodiscard]] std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - lev(a, b) / max(|a|, |b|); 1 when both are empty.
[[nodiscard]] double normalized_levenshtein(std::string_view a, std::string_view b);

// 1 when the output parsed and invokes the gold tool (trimmed, case
// sensitive), else 0.
[[nodiscard]] double score_tool_selection(const core::RankedOutput& pred, const core::ToolCall& gold);

// F1 of the argument key sets; 0 on a tool mismatch, 1 when both sets are
// empty. A sentinel gold scores 1 only for an exact generate_response().
[[nodiscard]] double score_param_names(const core::ToolCall& pred, const core::ToolCall& gold);

// Mean over gold keys of normalized_levenshtein(pred value, gold value), 0 for
// a gold key the prediction lacks; 0 on a tool mismatch, 1 for a gold call
// without arguments. A sentinel gold scores 1 only for an exact
// generate_response().
[[nodiscard]] double score_param_values(const core::ToolCall& pred, const core::ToolCall& gold);

[[nodiscard]] double score_format(const core::RankedOutput& pred);

// All four scores with the format gate applied: an unparsed output scores 0
// everywhere.
[[nodiscard]] core::InstanceScore score_instance(const core::RankedOutput& pred,
                                                 const core::TrainingInstance& instance);

struct RankAnalysis {
    double consistency = 0.0;        // % of outputs whose top-ranked tool is the invoked tool
    double ordering_accuracy = 0.0;  // % of (tool, sentinel) pairs ordered as in the gold label
    std::size_t outputs = 0;
    std::size_t pairs = 0;

    friend bool operator==(const RankAnalysis&, const RankAnalysis&) = default;
};

// outputs[i] answers instances[i]. Every non-sentinel toolset member forms a
// pair with the sentinel; it is useful when the gold label ranks it before
// the sentinel. A pair is correct when the predicted ranking holds both names
// on the same side of each other as the label. Unparsed outputs count as
// inconsistent and get every pair wrong. Throws AnalysisError on a length
// mismatch.
[[nodiscard]] RankAnalysis rank_analysis(const std::vector<core::RankedOutput>& outputs,
                                         const std::vector<core::TrainingInstance>& instances);

// Records sorted by instance id; means accumulated in that order, x100.
[[nodiscard]] core::EvalReport aggregate(std::vector<core::InstanceScore> scores);

// Scores predictions (instance id -> raw model text). An instance without a
// prediction is scored as an empty output. Throws InputError for a
// prediction whose id matches no instance, or for duplicate instance ids.
[[nodiscard]] core::EvalReport evaluate(const std::vector<core::TrainingInstance>& instances,
                                        const std::map<std::string, std::string>& predictions);

// Reads {"instance_id", "output"} JSONL. Duplicate ids are an InputError.
[[nodiscard]] std::map<std::string, std::string> read_predictions(const std::filesystem::path& path);

// Fixed-width table: one row per scenario present, then Overall.
[[nodiscard]] std::string render_table(const core::EvalReport& report);

[[nodiscard]] core::Json to_json(const RankAnalysis& analysis);

}  // namespace gentool::metrics
