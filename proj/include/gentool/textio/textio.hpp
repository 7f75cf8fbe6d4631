// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/json.hpp"
#include "gentool/core/stats.hpp"
#include "gentool/core/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gentool::textio {

inline constexpr std::string_view kFirstTaskKey = "The output of the first task";
inline constexpr std::string_view kSecondTaskKey = "The output of the second task";

struct PromptBundle {
    std::string system_and_task_text;  // template text up to the query line
    std::string query_block;
    std::string toolset_block;
};

// Toolset as a JSON array with two-space indentation, in the given order.
[[nodiscard]] std::string render_toolset(const std::vector<core::ToolSpec>& tools);

[[nodiscard]] PromptBundle prompt_bundle(const core::TrainingInstance& instance);
[[nodiscard]] std::string render_prompt(const core::TrainingInstance& instance);

// name("k"="v", ...) with keys and values JSON-escaped, arguments in stored
// order; the sentinel renders as generate_response().
[[nodiscard]] std::string render_invocation(const core::ToolCall& call);

// {"The output of the first task": [rank label...],
//  "The output of the second task": ["<invocation>"]} on one line.
[[nodiscard]] std::string render_gold(const core::TrainingInstance& instance);

// {"instance_id", "prompt", "gold"} row for fine-tuning corpora.
[[nodiscard]] core::Json render_row(const core::TrainingInstance& instance);

// Renderer pair used by corpus_stats.
[[nodiscard]] core::TextRenderer text_renderer();

// Parses one or more invocations written back to back (optionally separated
// by commas, semicolons or whitespace). Grammar per invocation: a tool
// identifier, optionally quoted, then a parenthesized list of key=value
// pairs. Keys may be bare or quoted; values are single- or double-quoted
// strings with backslash escapes, or bare numbers. nullopt on any deviation
// or on a repeated key within one call.
[[nodiscard]] std::optional<std::vector<core::ToolCall>> parse_invocations(std::string_view text);

// Exactly one invocation, or nullopt.
[[nodiscard]] std::optional<core::ToolCall> parse_invocation(std::string_view text);

// Two calls are the same invocation when tool name and argument set agree,
// regardless of argument order.
[[nodiscard]] bool same_invocation(const core::ToolCall& a, const core::ToolCall& b);

// Extracts the first balanced {...} block and strict-parses it. parse_ok
// requires exactly two keys, one starting with each task key; task one an
// array of strings (a trailing "()" on a name is dropped); task two a
// non-empty array of strings whose invocations all agree. Never throws.
[[nodiscard]] core::RankedOutput parse_model_output(std::string_view text);

}  // namespace gentool::textio
