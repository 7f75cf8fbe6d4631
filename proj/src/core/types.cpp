// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/types.hpp"

#include "gentool/core/text.hpp"

#include <array>

namespace gentool::core {

namespace {

constexpr std::array<std::pair<PairType, std::string_view>, 3> kPairTypeNames{{
    {PairType::zero_to_one, "zero_to_one"},
    {PairType::weak_to_strong, "weak_to_strong"},
    {PairType::test_only, "test_only"},
}};

constexpr std::array<std::pair<Scenario, std::string_view>, 5> kScenarioNames{{
    {Scenario::pure_train, "pure_train"},
    {Scenario::seen_q_unseen_t, "seen_q_unseen_t"},
    {Scenario::seen_q_seen_t, "seen_q_seen_t"},
    {Scenario::unseen_q_unseen_t, "unseen_q_unseen_t"},
    {Scenario::unseen_q_seen_t, "unseen_q_seen_t"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum value) {
    for (const auto& [e, name] : table) {
        if (e == value) return name;
    }
    return "unknown";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const std::array<std::pair<Enum, std::string_view>, N>& table,
                             std::string_view text) {
    for (const auto& [e, name] : table) {
        if (name == text) return e;
    }
    return std::nullopt;
}

}  // namespace

const ParameterSpec* ToolSpec::find_parameter(std::string_view param) const {
    for (const auto& p : parameters) {
        if (p.name == param) return &p;
    }
    return nullptr;
}

bool ToolSpec::is_sentinel() const { return same_tool_name(name, kSentinelName); }

ToolSpec sentinel_tool() {
    ToolSpec tool;
    tool.name = std::string(kSentinelName);
    tool.description = "Respond to the user directly without calling any tool";
    tool.returns.push_back({"response", "Direct natural-language answer to the query"});
    return tool;
}

ToolCall ToolCall::generate_response() { return ToolCall{std::string(kSentinelName), {}}; }

bool ToolCall::is_sentinel() const { return same_tool_name(tool_name, kSentinelName); }

const std::string* ToolCall::find_argument(std::string_view key) const {
    for (const auto& [k, v] : arguments) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::vector<std::string> ToolCall::keys() const {
    std::vector<std::string> out;
    out.reserve(arguments.size());
    for (const auto& arg : arguments) out.push_back(arg.first);
    return out;
}

std::string_view to_string(QueryRole role) {
    return role == QueryRole::strong ? "strong_query" : "weak_query";
}

std::optional<QueryRole> query_role_from_string(std::string_view text) {
    if (text == "strong_query") return QueryRole::strong;
    if (text == "weak_query") return QueryRole::weak;
    return std::nullopt;
}

const std::string& QueryToolCluster::query(QueryRole role) const {
    return role == QueryRole::strong ? strong_query : weak_query;
}

const ToolCall* QueryToolCluster::call_for(QueryRole role, std::string_view tool) const {
    const auto it = cross_calls.find({role, std::string(tool)});
    return it == cross_calls.end() ? nullptr : &it->second;
}

const ToolSpec* QueryToolCluster::find_tool(std::string_view tool) const {
    if (strong_tool.name == tool) return &strong_tool;
    if (weak_tool.name == tool) return &weak_tool;
    for (const auto& extra : extra_weak_tools) {
        if (extra.name == tool) return &extra;
    }
    return nullptr;
}

std::string_view to_string(PairType type) { return name_of(kPairTypeNames, type); }
std::string_view to_string(Scenario scenario) { return name_of(kScenarioNames, scenario); }

std::optional<PairType> pair_type_from_string(std::string_view text) {
    return value_of(kPairTypeNames, text);
}

std::optional<Scenario> scenario_from_string(std::string_view text) {
    return value_of(kScenarioNames, text);
}

bool is_unseen_tool(Scenario scenario) {
    return scenario == Scenario::seen_q_unseen_t || scenario == Scenario::unseen_q_unseen_t;
}

bool is_unseen_query(Scenario scenario) {
    return scenario == Scenario::unseen_q_unseen_t || scenario == Scenario::unseen_q_seen_t;
}

std::vector<std::string> TrainingInstance::toolset_names() const {
    std::vector<std::string> names;
    names.reserve(toolset.size());
    for (const auto& tool : toolset) names.push_back(tool.name);
    return names;
}

}  // namespace gentool::core
