// SPDX-License-Identifier: Apache-2.0
#include "gentool/synthesis/synthesis.hpp"

#include "gentool/core/text.hpp"
#include "gentool/error.hpp"
#include "gentool/provider/digest.hpp"
#include "gentool/provider/mock_generator.hpp"
#include "gentool/textio/templates.hpp"
#include "gentool/textio/textio.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gentool::synthesis {

using core::Json;

Json to_json(const SeedPair& seed) {
    return Json{{"query", seed.query}, {"gold_tool", core::to_json(seed.gold_tool)}, {"domain_tag", seed.domain_tag}};
}

SeedPair seed_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("seed must be a JSON object");
    SeedPair seed;
    const auto query = j.find("query");
    if (query == j.end() || !query->is_string()) throw InputError("seed needs a string \"query\"");
    seed.query = query->get<std::string>();
    const auto tool = j.find("gold_tool");
    if (tool == j.end()) throw InputError("seed needs a \"gold_tool\"");
    seed.gold_tool = core::tool_from_json(*tool);
    const auto domain = j.find("domain_tag");
    if (domain != j.end() && !domain->is_string()) throw InputError("\"domain_tag\" must be a string");
    seed.domain_tag = domain == j.end() ? "general" : domain->get<std::string>();
    return seed;
}

std::vector<SeedPair> read_seeds(const std::filesystem::path& path) {
    std::vector<SeedPair> seeds;
    core::for_each_jsonl(path, [&](const Json& j, std::size_t) {
        SeedPair seed = seed_from_json(j);
        if (auto problems = validate_seed(seed); !problems.empty()) {
            throw InputError("invalid seed: " + problems.front());
        }
        seeds.push_back(std::move(seed));
    });
    return seeds;
}

core::Violations validate_seed(const SeedPair& seed) {
    core::Violations out;
    if (core::trim(seed.query).empty()) out.emplace_back("empty query");
    for (auto& v : core::validate_tool(seed.gold_tool)) out.push_back("gold tool: " + v);
    return out;
}

Json to_json(const QualityReport& report) {
    Json checks = Json::object();
    for (const auto& [id, ok] : report.checks) checks[id] = ok;
    return Json{{"cluster_id", report.cluster_id},
                {"checks", checks},
                {"all_valid", report.all_valid},
                {"notes", report.notes}};
}

bool query_well_formed(std::string_view query) {
    const auto text = core::trim(query);
    if (text.empty()) return false;
    const char last = text.back();
    return last == '.' || last == '?' || last == '!' || core::word_count(text) > 3;
}

namespace {

bool any_token(const std::vector<std::string>& tokens, std::initializer_list<std::string_view> wanted) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
        return std::find(wanted.begin(), wanted.end(), t) != wanted.end();
    });
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// 2023-10-25, 2023/10/25, 10/25/2023, 19:00, 2023-10-25T19:00:00 ...
bool looks_like_date_or_time(std::string_view value) {
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!is_digit(value[i])) continue;
        std::size_t j = i;
        while (j < value.size() && is_digit(value[j])) ++j;
        const std::size_t run = j - i;
        if (j + 2 < value.size() && (value[j] == '-' || value[j] == '/') && is_digit(value[j + 1]) &&
            is_digit(value[j + 2]) && (run == 4 || run <= 2)) {
            return true;
        }
        if (run <= 2 && j + 2 < value.size() && value[j] == ':' && is_digit(value[j + 1]) && is_digit(value[j + 2])) {
            return true;
        }
        i = j;
    }
    return false;
}

}  // namespace

Grounding ground_value(std::string_view query, std::string_view key, std::string_view value) {
    const std::string needle = core::fold_case(core::trim(value));
    if (!needle.empty() && core::fold_case(query).find(needle) != std::string::npos) return Grounding::grounded;
    const auto tokens = core::identifier_tokens(key);
    if (any_token(tokens, {"date", "time", "datetime", "timestamp", "day"}) || looks_like_date_or_time(value)) {
        return Grounding::inferred;
    }
    if (any_token(tokens, {"user", "username", "passenger", "customer", "contact", "phone", "mobile", "email",
                           "account", "password", "passport", "ssn", "identity", "idnumber", "idcard"})) {
        return Grounding::inferred;
    }
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "id" && (tokens[i + 1] == "number" || tokens[i + 1] == "card")) return Grounding::inferred;
    }
    return Grounding::ungrounded;
}

QualityReport validate_cluster(const core::QueryToolCluster& cluster) {
    QualityReport report;
    report.cluster_id = cluster.id;

    const bool strong_ok = query_well_formed(cluster.strong_query);
    const bool weak_ok = query_well_formed(cluster.weak_query);
    if (!strong_ok) report.notes.emplace_back("strong query is not a well-formed request");
    if (!weak_ok) report.notes.emplace_back("weak query is not a well-formed request");

    bool schema_ok = true;
    auto schema_problems = [&](const core::ToolSpec& tool) {
        for (const auto& v : core::validate_tool(tool)) {
            schema_ok = false;
            report.notes.push_back(tool.name + ": " + v);
        }
    };
    schema_problems(cluster.strong_tool);
    schema_problems(cluster.weak_tool);
    for (const auto& extra : cluster.extra_weak_tools) schema_problems(extra);
    for (const auto& v : core::validate_cluster_structure(cluster)) {
        schema_ok = false;
        report.notes.push_back("cluster: " + v);
    }

    struct Annotated {
        const std::string* query;
        const core::ToolCall* call;
    };
    std::vector<Annotated> calls{{&cluster.strong_query, &cluster.strong_call},
                                 {&cluster.strong_query, &cluster.weak_call}};
    for (const auto& [key, call] : cluster.cross_calls) calls.push_back({&cluster.query(key.first), &call});

    bool keys_ok = true;
    bool grounded_ok = true;
    for (const auto& [query, call] : calls) {
        const core::ToolSpec* tool = cluster.find_tool(call->tool_name);
        if (tool == nullptr) {
            keys_ok = false;
            report.notes.push_back("call to unknown tool " + call->tool_name);
            continue;
        }
        for (const auto& v : core::validate_call_against(*call, *tool)) {
            keys_ok = false;
            report.notes.push_back(call->tool_name + ": " + v);
        }
        for (const auto& [key, value] : call->arguments) {
            switch (ground_value(*query, key, value)) {
                case Grounding::grounded: break;
                case Grounding::inferred:
                    report.notes.push_back(call->tool_name + "." + key + " inferred: " + value);
                    break;
                case Grounding::ungrounded:
                    grounded_ok = false;
                    report.notes.push_back(call->tool_name + "." + key + " not found in query: " + value);
                    break;
            }
        }
    }

    report.checks[std::string(kCheckStrongQuery)] = strong_ok;
    report.checks[std::string(kCheckWeakQuery)] = weak_ok;
    report.checks[std::string(kCheckSchema)] = schema_ok;
    report.checks[std::string(kCheckArgumentKeys)] = keys_ok;
    report.checks[std::string(kCheckGrounding)] = grounded_ok;
    report.all_valid = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.second; });
    return report;
}

std::string cluster_id_for(const SeedPair& seed) {
    const std::string domain = seed.domain_tag.empty() ? "general" : seed.domain_tag;
    return domain + "-" + provider::sha256_hex(seed.query + "\n" + seed.gold_tool.name).substr(0, 12);
}

namespace {

std::string with_feedback(std::string prompt, std::string_view feedback) {
    if (feedback.empty()) return prompt;
    if (!prompt.empty() && prompt.back() != '\n') prompt.push_back('\n');
    prompt += feedback;
    prompt.push_back('\n');
    return prompt;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::optional<Json> decode_json_block(std::string_view text) {
    const std::string_view body = core::strip_code_fences(text);
    const std::size_t brace = body.find('{');
    const std::size_t bracket = body.find('[');
    if (brace == std::string_view::npos && bracket == std::string_view::npos) return std::nullopt;
    const char open = brace < bracket ? '{' : '[';
    const auto block = core::first_balanced_block(body, open);
    if (!block) return std::nullopt;
    Json j = Json::parse(*block, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

}  // namespace

std::string weak_tool_prompt(const SeedPair& seed, const std::vector<std::string>& avoid_names,
                             std::string_view feedback) {
    std::string prompt = core::fill_template(
        textio::weak_tool_template(),
        {{"user_query", seed.query}, {"ex_tools", textio::render_toolset({seed.gold_tool})}});
    std::string notes;
    if (!avoid_names.empty()) notes = std::string(provider::mock::kAvoidNamesNote) + join(avoid_names, ", ");
    if (!feedback.empty()) notes += (notes.empty() ? "" : "\n") + std::string(feedback);
    return with_feedback(std::move(prompt), notes);
}

std::string query_prompt(const core::ToolSpec& weak, const core::ToolSpec& strong, std::string_view feedback) {
    std::string prompt = core::fill_template(
        textio::query_generation_template(),
        {{"weak", textio::render_toolset({weak})}, {"strong", textio::render_toolset({strong})}});
    return with_feedback(std::move(prompt), feedback);
}

std::string annotation_prompt(std::string_view query, const core::ToolSpec& tool, std::string_view feedback) {
    std::string prompt = core::fill_template(textio::call_annotation_template(),
                                             {{"demons_example_tool_set", std::string(textio::annotation_demo_tools())},
                                              {"query", std::string(query)},
                                              {"tools", textio::render_toolset({tool})}});
    return with_feedback(std::move(prompt), feedback);
}

std::optional<core::ToolSpec> decode_tool(std::string_view text) {
    auto j = decode_json_block(text);
    if (!j) return std::nullopt;
    if (j->is_array()) {
        if (j->empty()) return std::nullopt;
        j = j->front();
    }
    try {
        return core::tool_from_json(*j);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<std::vector<std::string>> decode_queries(std::string_view text) {
    const std::string_view body = core::strip_code_fences(text);
    const auto block = core::first_balanced_block(body, '[');
    if (!block) return std::nullopt;
    const Json j = Json::parse(*block, nullptr, false);
    if (j.is_discarded() || !j.is_array()) return std::nullopt;
    std::vector<std::string> out;
    for (const auto& item : j) {
        if (!item.is_string()) return std::nullopt;
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::optional<core::ToolCall> decode_annotation(std::string_view text) {
    const std::string_view body = core::trim(core::strip_code_fences(text));
    if (auto call = textio::parse_invocation(body)) return call;
    auto j = decode_json_block(body);
    if (!j) return std::nullopt;
    if (j->is_array()) {
        if (j->size() != 1 || !j->front().is_string()) return std::nullopt;
        return textio::parse_invocation(j->front().get<std::string>());
    }
    if (!j->is_object()) return std::nullopt;
    core::ToolCall call;
    for (std::string_view name_key : {"name", "tool_name"}) {
        if (auto it = j->find(name_key); it != j->end() && it->is_string()) call.tool_name = it->get<std::string>();
    }
    if (call.tool_name.empty()) return std::nullopt;
    for (std::string_view args_key : {"arguments", "parameters"}) {
        const auto it = j->find(args_key);
        if (it == j->end()) continue;
        if (!it->is_object()) return std::nullopt;
        for (const auto& [key, value] : it->items()) {
            call.arguments.emplace_back(key, value.is_string() ? value.get<std::string>() : core::dump_line(value));
        }
        break;
    }
    return call;
}

Synthesizer::Synthesizer(provider::TextGenerator& generator, SynthesisOptions options)
    : generator_(generator), options_(std::move(options)) {
    if (options_.attempts < 1) throw std::invalid_argument("synthesis attempts must be at least 1");
}

std::string Synthesizer::ask(const std::string& prompt, double temperature) {
    return generator_.generate({prompt, temperature, options_.max_tokens, options_.model_id});
}

std::vector<core::ToolSpec> Synthesizer::generate_weak_tools(const SeedPair& seed) {
    std::vector<core::ToolSpec> out;
    while (out.size() < 2) {
        std::vector<std::string> avoid;
        if (!out.empty()) avoid = {seed.gold_tool.name, out.front().name};
        std::string feedback;
        std::string raw;
        bool done = false;
        for (int attempt = 0; attempt < options_.attempts && !done; ++attempt) {
            if (attempt > 0 && avoid.empty()) avoid = {seed.gold_tool.name};
            raw = ask(weak_tool_prompt(seed, avoid, feedback), options_.creative_temperature);
            auto tool = decode_tool(raw);
            if (!tool) {
                feedback = "The previous answer was not a tool in valid JSON. Output only the tool JSON.";
                continue;
            }
            if (auto problems = core::validate_tool(*tool); !problems.empty()) {
                feedback = "The previous tool was invalid (" + problems.front() + "). Fix it.";
                continue;
            }
            const bool clash = tool->name == seed.gold_tool.name ||
                               std::any_of(out.begin(), out.end(), [&](const auto& t) { return t.name == tool->name; });
            if (clash) {
                feedback = "The previous tool reused an existing name. Choose a new name.";
                continue;
            }
            out.push_back(std::move(*tool));
            done = true;
        }
        if (!done) {
            throw SynthesisError("no usable weak tool for " + seed.gold_tool.name + " after " +
                                     std::to_string(options_.attempts) + " attempts",
                                 raw);
        }
    }
    return out;
}

std::vector<std::string> Synthesizer::generate_queries(const core::ToolSpec& weak, const core::ToolSpec& strong) {
    if (weak.name == strong.name) throw std::invalid_argument("weak and strong tool share the name " + weak.name);
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string feedback;
    std::string raw;
    for (int attempt = 0; attempt < options_.attempts && out.size() < 10; ++attempt) {
        raw = ask(query_prompt(weak, strong, feedback), options_.creative_temperature);
        auto queries = decode_queries(raw);
        if (!queries) {
            feedback = "The previous answer was not a JSON list of strings. Output only the list.";
            continue;
        }
        for (const auto& q : *queries) {
            std::string key = core::normalize_whitespace(q);
            if (key.empty() || !seen.insert(key).second) continue;
            out.emplace_back(core::trim(q));
            if (out.size() == 10) break;
        }
        feedback = "The previous answer had only " + std::to_string(out.size()) +
                   " distinct questions. Generate 10 new questions that differ from each other.";
    }
    if (out.size() < 10) {
        throw SynthesisError("only " + std::to_string(out.size()) + " distinct queries for " + strong.name, raw);
    }
    return out;
}

core::ToolCall Synthesizer::annotate_call(std::string_view query, const core::ToolSpec& tool) {
    if (tool.parameters.empty()) return core::ToolCall{tool.name, {}};
    std::string feedback;
    std::string raw;
    for (int attempt = 0; attempt < 2; ++attempt) {
        raw = ask(annotation_prompt(query, tool, feedback), options_.annotation_temperature);
        auto call = decode_annotation(raw);
        if (!call) {
            feedback = "The previous answer could not be parsed. Output a single call such as tool(name='value').";
            continue;
        }
        call->tool_name = std::string(core::trim(call->tool_name));
        if (auto problems = core::validate_call_against(*call, tool); !problems.empty()) {
            std::vector<std::string> names;
            for (const auto& p : tool.parameters) names.push_back(p.name);
            feedback = "The previous answer was rejected (" + problems.front() + "). Call " + tool.name +
                       " using only these parameter names: " + join(names, ", ") + ".";
            continue;
        }
        return std::move(*call);
    }
    throw SynthesisError("annotation of " + tool.name + " failed twice", raw);
}

core::QueryToolCluster Synthesizer::build_cluster(const SeedPair& seed) {
    if (auto problems = validate_seed(seed); !problems.empty()) throw InputError("invalid seed: " + problems.front());

    core::QueryToolCluster cluster;
    cluster.id = cluster_id_for(seed);
    cluster.strong_query = seed.query;
    cluster.strong_tool = seed.gold_tool;

    auto weak_tools = generate_weak_tools(seed);
    cluster.weak_tool = weak_tools.front();
    cluster.extra_weak_tools.assign(weak_tools.begin() + 1, weak_tools.end());

    auto queries = generate_queries(cluster.weak_tool, cluster.strong_tool);
    const auto chosen = std::find_if(queries.begin(), queries.end(), query_well_formed);
    const std::size_t pick = chosen == queries.end() ? 0 : static_cast<std::size_t>(chosen - queries.begin());
    cluster.weak_query = queries[pick];
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (i != pick) cluster.extra_queries.push_back(queries[i]);
    }

    using core::QueryRole;
    cluster.strong_call = annotate_call(cluster.strong_query, cluster.strong_tool);
    cluster.weak_call = annotate_call(cluster.strong_query, cluster.weak_tool);
    cluster.cross_calls[{QueryRole::strong, cluster.strong_tool.name}] = cluster.strong_call;
    cluster.cross_calls[{QueryRole::strong, cluster.weak_tool.name}] = cluster.weak_call;
    cluster.cross_calls[{QueryRole::weak, cluster.strong_tool.name}] =
        annotate_call(cluster.weak_query, cluster.strong_tool);
    cluster.cross_calls[{QueryRole::weak, cluster.weak_tool.name}] = annotate_call(cluster.weak_query, cluster.weak_tool);
    return cluster;
}

}  // namespace gentool::synthesis
