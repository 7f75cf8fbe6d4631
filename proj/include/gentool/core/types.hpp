// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gentool::core {

// Name of the pseudo-tool meaning "answer directly, no tool applies".
inline constexpr std::string_view kSentinelName = "generate_response";

struct ParameterSpec {
    std::string name;
    std::string description;
    std::string type = "string";
    bool required = true;

    friend bool operator==(const ParameterSpec&, const ParameterSpec&) = default;
};

struct ReturnField {
    std::string name;
    std::string description;

    friend bool operator==(const ReturnField&, const ReturnField&) = default;
};

// Schema of a callable tool. Parameter and return order is significant and
// preserved through serialization.
struct ToolSpec {
    std::string name;
    std::string description;
    std::vector<ParameterSpec> parameters;
    std::vector<ReturnField> returns;

    [[nodiscard]] const ParameterSpec* find_parameter(std::string_view param) const;
    [[nodiscard]] bool is_sentinel() const;

    friend bool operator==(const ToolSpec&, const ToolSpec&) = default;
};

// The generate_response pseudo-tool: no parameters, a single free-text result.
[[nodiscard]] ToolSpec sentinel_tool();

using Argument = std::pair<std::string, std::string>;

// One invocation: tool name plus ordered name/value pairs. Values are always
// text, numeric values included.
struct ToolCall {
    std::string tool_name;
    std::vector<Argument> arguments;

    [[nodiscard]] static ToolCall generate_response();
    [[nodiscard]] bool is_sentinel() const;
    [[nodiscard]] const std::string* find_argument(std::string_view key) const;
    [[nodiscard]] std::vector<std::string> keys() const;

    friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

// Which of the cluster's two selected queries a cross call answers.
enum class QueryRole { strong, weak };

[[nodiscard]] std::string_view to_string(QueryRole role);
[[nodiscard]] std::optional<QueryRole> query_role_from_string(std::string_view text);

using CrossCallKey = std::pair<QueryRole, std::string>;

// A strong tool t, its selected weak variant t', the seed query q and the
// selected generated query q', plus the surplus artifacts of synthesis.
struct QueryToolCluster {
    std::string id;
    std::string strong_query;
    ToolSpec strong_tool;
    std::string weak_query;
    ToolSpec weak_tool;
    std::vector<std::string> extra_queries;
    std::vector<ToolSpec> extra_weak_tools;
    ToolCall strong_call;  // q on t
    ToolCall weak_call;    // q on t'
    std::map<CrossCallKey, ToolCall> cross_calls;

    [[nodiscard]] const std::string& query(QueryRole role) const;
    [[nodiscard]] const ToolCall* call_for(QueryRole role, std::string_view tool) const;
    [[nodiscard]] const ToolSpec* find_tool(std::string_view tool) const;

    friend bool operator==(const QueryToolCluster&, const QueryToolCluster&) = default;
};

enum class PairType { zero_to_one, weak_to_strong, test_only };

enum class Scenario {
    pure_train,
    seen_q_unseen_t,
    seen_q_seen_t,
    unseen_q_unseen_t,
    unseen_q_seen_t,
};

inline constexpr Scenario kTestScenarios[] = {
    Scenario::seen_q_unseen_t,
    Scenario::seen_q_seen_t,
    Scenario::unseen_q_unseen_t,
    Scenario::unseen_q_seen_t,
};

[[nodiscard]] std::string_view to_string(PairType type);
[[nodiscard]] std::string_view to_string(Scenario scenario);
[[nodiscard]] std::optional<PairType> pair_type_from_string(std::string_view text);
[[nodiscard]] std::optional<Scenario> scenario_from_string(std::string_view text);

[[nodiscard]] bool is_unseen_tool(Scenario scenario);
[[nodiscard]] bool is_unseen_query(Scenario scenario);

// One training or test record (toolset, query, gold tool, gold call) with its
// full ranking label.
struct TrainingInstance {
    std::string id;
    std::vector<ToolSpec> toolset;
    std::string query;
    std::optional<std::string> gold_tool;  // nullopt: no tool applies
    ToolCall gold_call;
    std::vector<std::string> rank_label;
    PairType pair_type = PairType::test_only;
    Scenario scenario = Scenario::pure_train;
    std::string cluster_id;

    [[nodiscard]] std::vector<std::string> toolset_names() const;

    friend bool operator==(const TrainingInstance&, const TrainingInstance&) = default;
};

// Parsed model response: task-one ranking and task-two invocation.
struct RankedOutput {
    std::vector<std::string> ranking;
    ToolCall invocation;
    std::string raw_text;
    bool parse_ok = false;

    friend bool operator==(const RankedOutput&, const RankedOutput&) = default;
};

struct InstanceScore {
    std::string instance_id;
    Scenario scenario = Scenario::pure_train;
    double tool_selection = 0.0;
    double param_name = 0.0;
    double param_value = 0.0;
    double format_ok = 0.0;

    friend bool operator==(const InstanceScore&, const InstanceScore&) = default;
};

// Mean of each metric over a group of instances, as a percentage.
struct MetricMeans {
    std::size_t count = 0;
    double tool_selection = 0.0;
    double param_name = 0.0;
    double param_value = 0.0;
    double format_ok = 0.0;

    friend bool operator==(const MetricMeans&, const MetricMeans&) = default;
};

struct EvalReport {
    std::vector<InstanceScore> records;  // sorted by instance id
    std::map<Scenario, MetricMeans> per_scenario;
    MetricMeans overall;

    [[nodiscard]] bool empty() const { return records.empty(); }

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

}  // namespace gentool::core
