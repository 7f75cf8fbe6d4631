// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/json.hpp"

#include "gentool/core/text.hpp"
#include "gentool/error.hpp"

#include <fstream>
#include <sstream>

namespace gentool::core {

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object()) throw InputError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const Json& j, const char* key) {
    const Json& value = require(j, key);
    if (!value.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
    return value.get<std::string>();
}

std::string optional_string(const Json& j, const char* key, std::string fallback = {}) {
    if (!j.is_object()) return fallback;
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_string()) throw InputError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> string_array(const Json& j, const char* key) {
    const Json& value = require(j, key);
    if (!value.is_array()) throw InputError(std::string("field '") + key + "' must be an array");
    std::vector<std::string> out;
    out.reserve(value.size());
    for (const auto& item : value) {
        if (!item.is_string()) throw InputError(std::string("field '") + key + "' must hold strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::string scalar_text(const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

ParameterSpec parameter_from_json(const std::string& name, const Json& j) {
    ParameterSpec p;
    p.name = std::string(trim(name));
    if (j.is_string()) {
        p.description = j.get<std::string>();
    } else if (j.is_array()) {
        p.type = "enum";
        std::string joined;
        for (const auto& item : j) {
            if (!joined.empty()) joined += ", ";
            joined += scalar_text(item);
        }
        p.description = joined;
    } else if (j.is_object()) {
        p.description = optional_string(j, "description");
        p.type = optional_string(j, "type", "string");
    } else {
        throw InputError("parameter '" + name + "' must be an object, string or array");
    }
    return p;
}

}  // namespace

Json to_json(const ToolSpec& tool) {
    Json properties = Json::object();
    Json required = Json::array();
    for (const auto& p : tool.parameters) {
        properties[p.name] = Json{{"type", p.type}, {"description", p.description}};
        if (p.required) required.push_back(p.name);
    }
    Json returns = Json::object();
    for (const auto& r : tool.returns) returns[r.name] = r.description;
    return Json{
        {"name", tool.name},
        {"description", tool.description},
        {"arguments", Json{{"type", "object"}, {"properties", properties}, {"required", required}}},
        {"returns", returns},
    };
}

ToolSpec tool_from_json(const Json& j) {
    ToolSpec tool;
    tool.name = std::string(trim(require_string(j, "name")));
    tool.description = optional_string(j, "description");

    const Json* arguments = nullptr;
    if (auto it = j.find("arguments"); it != j.end()) {
        arguments = &*it;
    } else if (auto alt = j.find("parameters"); alt != j.end()) {
        arguments = &*alt;
    }
    if (arguments != nullptr && !arguments->is_null()) {
        if (!arguments->is_object()) throw InputError("tool '" + tool.name + "': 'arguments' must be an object");
        // Either the {"properties": ..., "required": ...} form or a flat
        // name -> description map.
        const bool nested = arguments->contains("properties");
        const Json& props = nested ? (*arguments)["properties"] : *arguments;
        if (!props.is_object()) throw InputError("tool '" + tool.name + "': 'properties' must be an object");
        for (const auto& [name, spec] : props.items()) {
            if (!nested && (name == "type" || name == "required")) continue;
            tool.parameters.push_back(parameter_from_json(name, spec));
        }
        if (nested && arguments->contains("required")) {
            const Json& req = (*arguments)["required"];
            if (!req.is_array()) throw InputError("tool '" + tool.name + "': 'required' must be an array");
            for (auto& p : tool.parameters) p.required = false;
            for (const auto& r : req) {
                if (!r.is_string()) throw InputError("tool '" + tool.name + "': 'required' must hold strings");
                for (auto& p : tool.parameters) {
                    if (p.name == trim(r.get<std::string>())) p.required = true;
                }
            }
        }
    }

    if (auto it = j.find("returns"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw InputError("tool '" + tool.name + "': 'returns' must be an object");
        for (const auto& [name, desc] : it->items()) {
            std::string text;
            if (desc.is_object()) {
                text = optional_string(desc, "description");
            } else {
                text = scalar_text(desc);
            }
            tool.returns.push_back({std::string(trim(name)), text});
        }
    }
    return tool;
}

Json to_json(const ToolCall& call) {
    Json args = Json::object();
    for (const auto& [k, v] : call.arguments) args[k] = v;
    return Json{{"name", call.tool_name}, {"arguments", args}};
}

ToolCall call_from_json(const Json& j) {
    ToolCall call;
    call.tool_name = std::string(trim(require_string(j, "name")));
    if (auto it = j.find("arguments"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) throw InputError("call '" + call.tool_name + "': 'arguments' must be an object");
        for (const auto& [k, v] : it->items()) call.arguments.emplace_back(k, scalar_text(v));
    }
    return call;
}

Json to_json(const QueryToolCluster& c) {
    Json extra_tools = Json::array();
    for (const auto& t : c.extra_weak_tools) extra_tools.push_back(to_json(t));
    Json cross = Json::array();
    for (const auto& [key, call] : c.cross_calls) {
        cross.push_back(Json{{"query", to_string(key.first)}, {"tool", key.second}, {"call", to_json(call)}});
    }
    return Json{
        {"id", c.id},
        {"strong_query", c.strong_query},
        {"strong_tool", to_json(c.strong_tool)},
        {"weak_query", c.weak_query},
        {"weak_tool", to_json(c.weak_tool)},
        {"extra_queries", c.extra_queries},
        {"extra_weak_tools", extra_tools},
        {"strong_call", to_json(c.strong_call)},
        {"weak_call", to_json(c.weak_call)},
        {"cross_calls", cross},
    };
}

QueryToolCluster cluster_from_json(const Json& j) {
    QueryToolCluster c;
    c.id = require_string(j, "id");
    c.strong_query = require_string(j, "strong_query");
    c.strong_tool = tool_from_json(require(j, "strong_tool"));
    c.weak_query = require_string(j, "weak_query");
    c.weak_tool = tool_from_json(require(j, "weak_tool"));
    c.extra_queries = string_array(j, "extra_queries");
    const Json& extra = require(j, "extra_weak_tools");
    if (!extra.is_array()) throw InputError("field 'extra_weak_tools' must be an array");
    for (const auto& t : extra) c.extra_weak_tools.push_back(tool_from_json(t));
    c.strong_call = call_from_json(require(j, "strong_call"));
    c.weak_call = call_from_json(require(j, "weak_call"));
    const Json& cross = require(j, "cross_calls");
    if (!cross.is_array()) throw InputError("field 'cross_calls' must be an array");
    for (const auto& entry : cross) {
        const auto role = query_role_from_string(require_string(entry, "query"));
        if (!role) throw InputError("cross call has unknown query role");
        c.cross_calls[{*role, require_string(entry, "tool")}] = call_from_json(require(entry, "call"));
    }
    return c;
}

Json to_json(const TrainingInstance& inst) {
    return Json{
        {"id", inst.id},
        {"cluster_id", inst.cluster_id},
        {"pair_type", to_string(inst.pair_type)},
        {"scenario", to_string(inst.scenario)},
        {"query", inst.query},
        {"toolset", tools_to_json(inst.toolset)},
        {"gold_tool", inst.gold_tool ? Json(*inst.gold_tool) : Json(nullptr)},
        {"gold_call", to_json(inst.gold_call)},
        {"rank_label", inst.rank_label},
    };
}

TrainingInstance instance_from_json(const Json& j) {
    TrainingInstance inst;
    inst.id = require_string(j, "id");
    inst.cluster_id = require_string(j, "cluster_id");
    const auto pair = pair_type_from_string(require_string(j, "pair_type"));
    if (!pair) throw InputError("unknown pair_type");
    inst.pair_type = *pair;
    const auto scenario = scenario_from_string(require_string(j, "scenario"));
    if (!scenario) throw InputError("unknown scenario");
    inst.scenario = *scenario;
    inst.query = require_string(j, "query");
    const Json& toolset = require(j, "toolset");
    if (!toolset.is_array()) throw InputError("field 'toolset' must be an array");
    for (const auto& t : toolset) inst.toolset.push_back(tool_from_json(t));
    const Json& gold = require(j, "gold_tool");
    if (!gold.is_null()) {
        if (!gold.is_string()) throw InputError("field 'gold_tool' must be a string or null");
        inst.gold_tool = std::string(trim(gold.get<std::string>()));
    }
    inst.gold_call = call_from_json(require(j, "gold_call"));
    inst.rank_label = string_array(j, "rank_label");
    return inst;
}

Json to_json(const RankedOutput& out) {
    return Json{
        {"ranking", out.ranking},
        {"invocation", to_json(out.invocation)},
        {"raw_text", out.raw_text},
        {"parse_ok", out.parse_ok},
    };
}

RankedOutput ranked_output_from_json(const Json& j) {
    RankedOutput out;
    out.ranking = string_array(j, "ranking");
    out.invocation = call_from_json(require(j, "invocation"));
    out.raw_text = require_string(j, "raw_text");
    const Json& ok = require(j, "parse_ok");
    if (!ok.is_boolean()) throw InputError("field 'parse_ok' must be a boolean");
    out.parse_ok = ok.get<bool>();
    return out;
}

Json to_json(const InstanceScore& s) {
    return Json{
        {"instance_id", s.instance_id},
        {"scenario", to_string(s.scenario)},
        {"tool_selection", s.tool_selection},
        {"param_name", s.param_name},
        {"param_value", s.param_value},
        {"format_ok", s.format_ok},
    };
}

InstanceScore score_from_json(const Json& j) {
    InstanceScore s;
    s.instance_id = require_string(j, "instance_id");
    const auto scenario = scenario_from_string(require_string(j, "scenario"));
    if (!scenario) throw InputError("unknown scenario");
    s.scenario = *scenario;
    s.tool_selection = require(j, "tool_selection").get<double>();
    s.param_name = require(j, "param_name").get<double>();
    s.param_value = require(j, "param_value").get<double>();
    s.format_ok = require(j, "format_ok").get<double>();
    return s;
}

Json to_json(const MetricMeans& m) {
    return Json{
        {"count", m.count},
        {"tool_selection", m.tool_selection},
        {"param_name", m.param_name},
        {"param_value", m.param_value},
        {"format_ok", m.format_ok},
    };
}

Json to_json(const EvalReport& report) {
    Json scenarios = Json::object();
    for (const auto& [scenario, means] : report.per_scenario) {
        scenarios[std::string(to_string(scenario))] = to_json(means);
    }
    Json records = Json::array();
    for (const auto& r : report.records) records.push_back(to_json(r));
    return Json{
        {"empty", report.empty()},
        {"overall", to_json(report.overall)},
        {"scenarios", scenarios},
        {"records", records},
    };
}

Json tools_to_json(const std::vector<ToolSpec>& tools) {
    Json out = Json::array();
    for (const auto& t : tools) out.push_back(to_json(t));
    return out;
}

std::string dump_line(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

std::string dump_pretty(const Json& j) { return j.dump(2, ' ', false, Json::error_handler_t::replace); }

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t line)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        Json doc = Json::parse(line, nullptr, false);
        if (doc.is_discarded()) throw InputError(path.string() + ": invalid JSON", line_no);
        try {
            fn(doc, line_no);
        } catch (const InputError& e) {
            if (e.line() != 0) throw;
            throw InputError(path.string() + ": " + e.what(), line_no);
        } catch (const Json::exception& e) {
            throw InputError(path.string() + ": " + e.what(), line_no);
        }
    }
}

std::vector<TrainingInstance> read_instances(const std::filesystem::path& path) {
    std::vector<TrainingInstance> out;
    for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(instance_from_json(j)); });
    return out;
}

std::vector<QueryToolCluster> read_clusters(const std::filesystem::path& path) {
    std::vector<QueryToolCluster> out;
    for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(cluster_from_json(j)); });
    return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& lines) {
    std::string text;
    for (const auto& j : lines) {
        text += dump_line(j);
        text.push_back('\n');
    }
    write_text(path, text);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace gentool::core
