// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/json.hpp"
#include "gentool/core/types.hpp"
#include "gentool/core/validate.hpp"
#include "gentool/provider/provider.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gentool::synthesis {

struct SeedPair {
    std::string query;
    core::ToolSpec gold_tool;
    std::string domain_tag;

    friend bool operator==(const SeedPair&, const SeedPair&) = default;
};

[[nodiscard]] core::Json to_json(const SeedPair& seed);
[[nodiscard]] SeedPair seed_from_json(const core::Json& j);
[[nodiscard]] std::vector<SeedPair> read_seeds(const std::filesystem::path& path);

// Empty when the seed has a nonempty query and a valid tool.
[[nodiscard]] core::Violations validate_seed(const SeedPair& seed);

// Rubric row ids used in QualityReport::checks.
inline constexpr std::string_view kCheckStrongQuery = "strong_query_well_formed";
inline constexpr std::string_view kCheckWeakQuery = "weak_query_well_formed";
inline constexpr std::string_view kCheckSchema = "schema_conformance";
inline constexpr std::string_view kCheckArgumentKeys = "argument_keys_subset";
inline constexpr std::string_view kCheckGrounding = "argument_values_grounded";

struct QualityReport {
    std::string cluster_id;
    std::map<std::string, bool> checks;
    bool all_valid = false;
    // Human-readable reasons for failed checks and values accepted as inferred.
    std::vector<std::string> notes;
};

[[nodiscard]] core::Json to_json(const QualityReport& report);

// Nonempty, and either ends in '.', '?' or '!' or has more than three words.
[[nodiscard]] bool query_well_formed(std::string_view query);

enum class Grounding { grounded, inferred, ungrounded };

// grounded: the value occurs in the query after ASCII case folding.
// inferred: not in the query, but a date/time or personal-information value
// (judged from the parameter name or the value's shape), which annotators may
// legitimately supply from context.
[[nodiscard]] Grounding ground_value(std::string_view query, std::string_view key, std::string_view value);

[[nodiscard]] QualityReport validate_cluster(const core::QueryToolCluster& cluster);

// <domain>-<first 12 hex digits of sha256(query "\n" tool name)>.
[[nodiscard]] std::string cluster_id_for(const SeedPair& seed);

struct SynthesisOptions {
    double creative_temperature = provider::kCreativeTemperature;
    double annotation_temperature = provider::kAnnotationTemperature;
    int max_tokens = provider::kDefaultMaxTokens;
    std::string model_id = "gpt-4o";
    // Generations per weak tool and per query batch before giving up.
    int attempts = 3;
};

// Prompt builders. The first prompt of each stage is the template filled
// verbatim; retries append a short note describing what to fix, which also
// gives the retry its own cache key.
[[nodiscard]] std::string weak_tool_prompt(const SeedPair& seed, const std::vector<std::string>& avoid_names,
                                           std::string_view feedback);
[[nodiscard]] std::string query_prompt(const core::ToolSpec& weak, const core::ToolSpec& strong,
                                       std::string_view feedback);
[[nodiscard]] std::string annotation_prompt(std::string_view query, const core::ToolSpec& tool,
                                            std::string_view feedback);

// Lenient decoding of a generated tool: code fences stripped, first balanced
// JSON block strict-parsed, first element taken when it is an array.
// nullopt when nothing decodes.
[[nodiscard]] std::optional<core::ToolSpec> decode_tool(std::string_view text);

// Generated question list: a JSON array of strings after the same repair.
[[nodiscard]] std::optional<std::vector<std::string>> decode_queries(std::string_view text);

// Annotation output as a JSON object {"name"|"tool_name", "arguments"|
// "parameters"}, a JSON array holding one invocation string, or a bare
// invocation string.
[[nodiscard]] std::optional<core::ToolCall> decode_annotation(std::string_view text);

// The three synthesis stages over one text generator. Stateless apart from
// the generator reference; safe to use from several threads when the
// generator is.
class Synthesizer {
public:
    explicit Synthesizer(provider::TextGenerator& generator, SynthesisOptions options = {});

    // Two structurally valid variants whose names differ from the gold tool
    // and from each other. Throws SynthesisError after options.attempts
    // unusable generations for either variant.
    [[nodiscard]] std::vector<core::ToolSpec> generate_weak_tools(const SeedPair& seed);

    // Exactly ten distinct queries (distinct after whitespace normalization).
    // Throws std::invalid_argument when the two tools share a name.
    [[nodiscard]] std::vector<std::string> generate_queries(const core::ToolSpec& weak,
                                                            const core::ToolSpec& strong);

    // Call whose keys are a subset of the tool's parameters. A tool without
    // parameters yields an empty call without consulting the generator. One
    // re-prompt on a bad answer, then SynthesisError.
    [[nodiscard]] core::ToolCall annotate_call(std::string_view query, const core::ToolSpec& tool);

    [[nodiscard]] core::QueryToolCluster build_cluster(const SeedPair& seed);

    [[nodiscard]] const SynthesisOptions& options() const { return options_; }

private:
    std::string ask(const std::string& prompt, double temperature);

    provider::TextGenerator& generator_;
    SynthesisOptions options_;
};

// Synthetic seed corpus for offline runs: `count` tools with unique names
// drawn from a fixed domain catalogue, each paired with a query that
// mentions every parameter. Pure function of (count, seed).
[[nodiscard]] std::vector<SeedPair> mock_seed_corpus(std::size_t count, std::uint64_t seed);

}  // namespace gentool::synthesis
