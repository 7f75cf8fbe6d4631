// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>

namespace gentool::core {

// Insertion-ordered so schemas keep parameter order and output is stable.
using Json = nlohmann::ordered_json;

// Tool schema:
//   {"name": ..., "description": ...,
//    "arguments": {"type": "object",
//                  "properties": {"<param>": {"type": ..., "description": ...}},
//                  "required": ["<param>", ...]},
//    "returns": {"<field>": "<description>"}}
// Decoding also accepts a bare description string or an enum array in place
// of a property object, and treats a missing "required" list as all-required.
[[nodiscard]] Json to_json(const ToolSpec& tool);
[[nodiscard]] ToolSpec tool_from_json(const Json& j);

// {"name": ..., "arguments": {"<key>": "<value>"}}; non-string argument
// values are converted to their JSON text on decode.
[[nodiscard]] Json to_json(const ToolCall& call);
[[nodiscard]] ToolCall call_from_json(const Json& j);

[[nodiscard]] Json to_json(const QueryToolCluster& cluster);
[[nodiscard]] QueryToolCluster cluster_from_json(const Json& j);

[[nodiscard]] Json to_json(const TrainingInstance& instance);
[[nodiscard]] TrainingInstance instance_from_json(const Json& j);

[[nodiscard]] Json to_json(const RankedOutput& output);
[[nodiscard]] RankedOutput ranked_output_from_json(const Json& j);

[[nodiscard]] Json to_json(const InstanceScore& score);
[[nodiscard]] InstanceScore score_from_json(const Json& j);

[[nodiscard]] Json to_json(const MetricMeans& means);
[[nodiscard]] Json to_json(const EvalReport& report);

[[nodiscard]] Json tools_to_json(const std::vector<ToolSpec>& tools);

// Compact single-line dump; invalid UTF-8 is replaced rather than thrown on.
[[nodiscard]] std::string dump_line(const Json& j);

// Pretty dump with two-space indent.
[[nodiscard]] std::string dump_pretty(const Json& j);

// Calls fn for each non-blank line of a JSONL file. Parse failures and any
// gentool::Error or JSON exception raised by fn become InputError carrying
// the 1-based line number.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t line)>& fn);

[[nodiscard]] std::vector<TrainingInstance> read_instances(const std::filesystem::path& path);
[[nodiscard]] std::vector<QueryToolCluster> read_clusters(const std::filesystem::path& path);

// Writes one compact JSON document per line, '\n' terminated, replacing the
// file atomically enough for our needs (write then rename).
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& lines);
void write_text(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

}  // namespace gentool::core
