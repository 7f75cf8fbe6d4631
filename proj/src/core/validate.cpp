// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/validate.hpp"

#include "gentool/core/text.hpp"

#include <algorithm>
#include <set>

namespace gentool::core {

namespace {

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

Violations validate_tool(const ToolSpec& tool) {
    Violations out;
    if (trim(tool.name).empty()) {
        out.emplace_back("empty name");
    } else if (!is_identifier(trim(tool.name))) {
        out.push_back("invalid name: " + tool.name);
    }
    std::set<std::string> seen;
    for (const auto& p : tool.parameters) {
        if (trim(p.name).empty()) {
            out.emplace_back("empty parameter name");
            continue;
        }
        if (!seen.insert(std::string(trim(p.name))).second) out.emplace_back("duplicate parameter");
    }
    if (tool.returns.empty()) out.emplace_back("no return fields");
    std::set<std::string> returns;
    for (const auto& r : tool.returns) {
        if (trim(r.name).empty()) {
            out.emplace_back("empty return field name");
        } else if (!returns.insert(std::string(trim(r.name))).second) {
            out.push_back("duplicate return field: " + r.name);
        }
    }
    return out;
}

Violations validate_call(const ToolCall& call) {
    Violations out;
    if (trim(call.tool_name).empty()) out.emplace_back("empty tool name");
    std::set<std::string> seen;
    for (const auto& [key, value] : call.arguments) {
        if (!seen.insert(key).second) out.push_back("duplicate argument: " + key);
    }
    if (call.is_sentinel() && !call.arguments.empty()) out.emplace_back("sentinel call with arguments");
    return out;
}

Violations validate_call_against(const ToolCall& call, const ToolSpec& tool) {
    Violations out = validate_call(call);
    if (!same_tool_name(call.tool_name, tool.name)) {
        out.push_back("tool mismatch: " + call.tool_name + " vs " + tool.name);
    }
    for (const auto& [key, value] : call.arguments) {
        if (tool.find_parameter(key) == nullptr) out.push_back("argument outside schema: " + key);
    }
    return out;
}

Violations validate_cluster_structure(const QueryToolCluster& c) {
    Violations out;
    auto append = [&out](const std::string& prefix, const Violations& v) {
        for (const auto& item : v) out.push_back(prefix + item);
    };
    if (c.id.empty()) out.emplace_back("empty cluster id");
    append("strong tool: ", validate_tool(c.strong_tool));
    append("weak tool: ", validate_tool(c.weak_tool));
    for (const auto& t : c.extra_weak_tools) append("extra weak tool: ", validate_tool(t));
    if (same_tool_name(c.strong_tool.name, c.weak_tool.name)) out.emplace_back("strong and weak tool share a name");
    if (!same_tool_name(c.strong_call.tool_name, c.strong_tool.name)) {
        out.emplace_back("strong call does not name the strong tool");
    }
    if (!same_tool_name(c.weak_call.tool_name, c.weak_tool.name)) {
        out.emplace_back("weak call does not name the weak tool");
    }
    for (const auto& [key, call] : c.cross_calls) {
        const ToolSpec* tool = c.find_tool(key.second);
        if (tool == nullptr) {
            out.push_back("cross call references unknown tool: " + key.second);
        } else if (!same_tool_name(call.tool_name, key.second)) {
            out.push_back("cross call keyed by " + key.second + " names " + call.tool_name);
        }
    }
    return out;
}

Violations validate_instance(const TrainingInstance& inst, int k) {
    Violations out;
    const auto names = inst.toolset_names();
    if (static_cast<int>(names.size()) != k + 1) {
        out.push_back("toolset size: " + std::to_string(names.size()) + " != " + std::to_string(k + 1));
    }
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) out.emplace_back("duplicate toolset names");
    if (!unique.contains(std::string(kSentinelName))) out.emplace_back("sentinel missing from toolset");

    if (inst.gold_tool) {
        if (!unique.contains(*inst.gold_tool)) out.push_back("gold tool not in toolset: " + *inst.gold_tool);
        if (!same_tool_name(inst.gold_call.tool_name, *inst.gold_tool)) {
            out.emplace_back("gold call does not name the gold tool");
        }
    } else if (!inst.gold_call.is_sentinel() || !inst.gold_call.arguments.empty()) {
        out.emplace_back("gold call must be generate_response() when no tool applies");
    }
    for (const auto& v : validate_call(inst.gold_call)) out.push_back("gold call: " + v);

    auto sorted_label = inst.rank_label;
    auto sorted_names = names;
    std::sort(sorted_label.begin(), sorted_label.end());
    std::sort(sorted_names.begin(), sorted_names.end());
    if (sorted_label != sorted_names) out.emplace_back("rank label is not a permutation of the toolset");
    if (inst.rank_label.empty() || !same_tool_name(inst.rank_label.front(), inst.gold_call.tool_name)) {
        out.emplace_back("rank label head does not name the gold call's tool");
    }
    return out;
}

Violations validate_tool_corpus(const std::vector<ToolSpec>& tools) {
    Violations out;
    std::set<std::string> seen;
    for (const auto& t : tools) {
        for (const auto& v : validate_tool(t)) out.push_back(t.name + ": " + v);
        if (!seen.insert(std::string(trim(t.name))).second) out.push_back("duplicate tool name: " + t.name);
    }
    return out;
}

}  // namespace gentool::core
