// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/types.hpp"

#include <string>
#include <vector>

namespace gentool::core {

inline constexpr int kDefaultToolsetK = 5;

// Violation messages are short fixed phrases ("empty name", "duplicate
// parameter", ...) followed by detail after a colon, so callers can match on
// the prefix. An empty result means the value is well formed.
using Violations = std::vector<std::string>;

[[nodiscard]] Violations validate_tool(const ToolSpec& tool);

// Argument keys unique and tool name set; no schema check.
[[nodiscard]] Violations validate_call(const ToolCall& call);

// Call names the tool and only uses keys from its schema.
[[nodiscard]] Violations validate_call_against(const ToolCall& call, const ToolSpec& tool);

// Structural QueryToolCluster invariants.
[[nodiscard]] Violations validate_cluster_structure(const QueryToolCluster& cluster);

// Toolset of exactly k+1 unique names including the sentinel, gold membership,
// rank label a permutation whose head names the gold call's tool.
[[nodiscard]] Violations validate_instance(const TrainingInstance& instance, int k = kDefaultToolsetK);

// Names must be unique across a corpus of tools.
[[nodiscard]] Violations validate_tool_corpus(const std::vector<ToolSpec>& tools);

}  // namespace gentool::core
