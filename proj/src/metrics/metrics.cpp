// SPDX-License-Identifier: Apache-2.0
#include "gentool/metrics/metrics.hpp"

#include "gentool/core/text.hpp"
#include "gentool/error.hpp"
#include "gentool/textio/textio.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

namespace gentool::metrics {

using core::ToolCall;

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char lead = byte(i);
        std::size_t len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if (lead < 0x80) {
            len = 1;
            cp = lead;
        } else if (lead >= 0xC2 && lead <= 0xDF) {
            len = 2;
            cp = lead & 0x1F;
            min = 0x80;
        } else if (lead >= 0xE0 && lead <= 0xEF) {
            len = 3;
            cp = lead & 0x0F;
            min = 0x800;
        } else if (lead >= 0xF0 && lead <= 0xF4) {
            len = 4;
            cp = lead & 0x07;
            min = 0x10000;
        }
        bool ok = len > 0 && i + len <= text.size();
        for (std::size_t j = 1; ok && j < len; ++j) {
            if ((byte(i + j) & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (byte(i + j) & 0x3F);
            }
        }
        if (ok && len > 1 && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
        if (!ok) {
            out.push_back(static_cast<char32_t>(0xDC00 + lead));
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::u32string x = decode_utf8(a);
    const std::u32string y = decode_utf8(b);
    if (x.empty()) return y.size();
    if (y.empty()) return x.size();
    std::vector<std::size_t> row(y.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (x[i - 1] == y[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[y.size()];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
    const std::size_t longest = std::max(decode_utf8(a).size(), decode_utf8(b).size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

double score_tool_selection(const core::RankedOutput& pred, const ToolCall& gold) {
    return pred.parse_ok && core::same_tool_name(pred.invocation.tool_name, gold.tool_name) ? 1.0 : 0.0;
}

namespace {

bool exact_sentinel(const ToolCall& call) {
    return core::same_tool_name(call.tool_name, core::kSentinelName) && call.arguments.empty();
}

}  // namespace

double score_param_names(const ToolCall& pred, const ToolCall& gold) {
    if (!core::same_tool_name(pred.tool_name, gold.tool_name)) return 0.0;
    if (gold.is_sentinel()) return exact_sentinel(pred) ? 1.0 : 0.0;
    const auto pk = pred.keys();
    const auto gk = gold.keys();
    const std::set<std::string> p(pk.begin(), pk.end());
    const std::set<std::string> g(gk.begin(), gk.end());
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& key : p) common += g.count(key);
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(p.size());
    const double recall = static_cast<double>(common) / static_cast<double>(g.size());
    return 2.0 * precision * recall / (precision + recall);
}

double score_param_values(const ToolCall& pred, const ToolCall& gold) {
    if (!core::same_tool_name(pred.tool_name, gold.tool_name)) return 0.0;
    if (gold.is_sentinel()) return exact_sentinel(pred) ? 1.0 : 0.0;
    if (gold.arguments.empty()) return 1.0;
    double total = 0.0;
    for (const auto& [key, value] : gold.arguments) {
        if (const std::string* predicted = pred.find_argument(key)) total += normalized_levenshtein(*predicted, value);
    }
    return total / static_cast<double>(gold.arguments.size());
}

double score_format(const core::RankedOutput& pred) { return pred.parse_ok ? 1.0 : 0.0; }

core::InstanceScore score_instance(const core::RankedOutput& pred, const core::TrainingInstance& instance) {
    core::InstanceScore score;
    score.instance_id = instance.id;
    score.scenario = instance.scenario;
    score.format_ok = score_format(pred);
    if (!pred.parse_ok) return score;
    score.tool_selection = score_tool_selection(pred, instance.gold_call);
    score.param_name = score_param_names(pred.invocation, instance.gold_call);
    score.param_value = score_param_values(pred.invocation, instance.gold_call);
    return score;
}

RankAnalysis rank_analysis(const std::vector<core::RankedOutput>& outputs,
                           const std::vector<core::TrainingInstance>& instances) {
    if (outputs.size() != instances.size()) {
        throw AnalysisError("rank analysis got " + std::to_string(outputs.size()) + " outputs for " +
                            std::to_string(instances.size()) + " instances");
    }
    RankAnalysis result;
    result.outputs = outputs.size();
    std::size_t consistent = 0;
    std::size_t correct_pairs = 0;
    const std::string sentinel(core::kSentinelName);

    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto& out = outputs[i];
        const auto& inst = instances[i];
        if (out.parse_ok && !out.ranking.empty() &&
            core::same_tool_name(out.ranking.front(), out.invocation.tool_name)) {
            ++consistent;
        }

        const auto position = [](const std::vector<std::string>& list, std::string_view name) -> std::ptrdiff_t {
            for (std::size_t p = 0; p < list.size(); ++p) {
                if (core::same_tool_name(list[p], name)) return static_cast<std::ptrdiff_t>(p);
            }
            return -1;
        };
        const std::ptrdiff_t gold_sentinel = position(inst.rank_label, sentinel);
        const std::ptrdiff_t pred_sentinel = out.parse_ok ? position(out.ranking, sentinel) : -1;
        for (const auto& tool : inst.toolset) {
            if (tool.name == sentinel) continue;
            ++result.pairs;
            if (pred_sentinel < 0) continue;
            const std::ptrdiff_t gold_pos = position(inst.rank_label, tool.name);
            const std::ptrdiff_t pred_pos = position(out.ranking, tool.name);
            if (pred_pos < 0) continue;
            const bool useful = gold_pos >= 0 && gold_pos < gold_sentinel;
            if (useful == (pred_pos < pred_sentinel)) ++correct_pairs;
        }
    }
    if (result.outputs > 0) {
        result.consistency = static_cast<double>(consistent) / static_cast<double>(result.outputs) * 100.0;
    }
    if (result.pairs > 0) {
        result.ordering_accuracy = static_cast<double>(correct_pairs) / static_cast<double>(result.pairs) * 100.0;
    }
    return result;
}

namespace {

struct Sums {
    std::size_t count = 0;
    double tool_selection = 0.0;
    double param_name = 0.0;
    double param_value = 0.0;
    double format_ok = 0.0;

    void add(const core::InstanceScore& s) {
        ++count;
        tool_selection += s.tool_selection;
        param_name += s.param_name;
        param_value += s.param_value;
        format_ok += s.format_ok;
    }

    [[nodiscard]] core::MetricMeans means() const {
        core::MetricMeans m;
        m.count = count;
        if (count == 0) return m;
        const double n = static_cast<double>(count);
        m.tool_selection = tool_selection / n * 100.0;
        m.param_name = param_name / n * 100.0;
        m.param_value = param_value / n * 100.0;
        m.format_ok = format_ok / n * 100.0;
        return m;
    }
};

}  // namespace

core::EvalReport aggregate(std::vector<core::InstanceScore> scores) {
    std::stable_sort(scores.begin(), scores.end(),
                     [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; });
    core::EvalReport report;
    Sums overall;
    std::map<core::Scenario, Sums> per;
    for (const auto& s : scores) {
        overall.add(s);
        per[s.scenario].add(s);
    }
    report.overall = overall.means();
    for (const auto& [scenario, sums] : per) report.per_scenario[scenario] = sums.means();
    report.records = std::move(scores);
    return report;
}

core::EvalReport evaluate(const std::vector<core::TrainingInstance>& instances,
                          const std::map<std::string, std::string>& predictions) {
    std::set<std::string> ids;
    for (const auto& inst : instances) {
        if (!ids.insert(inst.id).second) throw InputError("duplicate instance id " + inst.id);
    }
    for (const auto& [id, text] : predictions) {
        if (ids.count(id) == 0) throw InputError("prediction for unknown instance " + id);
    }
    std::vector<core::InstanceScore> scores;
    scores.reserve(instances.size());
    for (const auto& inst : instances) {
        const auto it = predictions.find(inst.id);
        const auto parsed = textio::parse_model_output(it == predictions.end() ? std::string_view() : it->second);
        scores.push_back(score_instance(parsed, inst));
    }
    return aggregate(std::move(scores));
}

std::map<std::string, std::string> read_predictions(const std::filesystem::path& path) {
    std::map<std::string, std::string> out;
    core::for_each_jsonl(path, [&](const core::Json& j, std::size_t) {
        if (!j.is_object() || !j.contains("instance_id") || !j["instance_id"].is_string() || !j.contains("output") ||
            !j["output"].is_string()) {
            throw InputError("prediction needs string \"instance_id\" and \"output\"");
        }
        const auto id = j["instance_id"].get<std::string>();
        if (!out.emplace(id, j["output"].get<std::string>()).second) {
            throw InputError("duplicate prediction for " + id);
        }
    });
    return out;
}

std::string render_table(const core::EvalReport& report) {
    char line[256];
    std::string out;
    std::snprintf(line, sizeof line, "%-22s %14s %14s %15s %15s %8s\n", "Scenario", "Tool Selection",
                  "Parameter Name", "Parameter Value", "Format Accuracy", "N");
    out += line;
    out += std::string(92, '-') + "\n";
    auto row = [&](std::string_view name, const core::MetricMeans& m) {
        std::snprintf(line, sizeof line, "%-22.*s %14.2f %14.2f %15.2f %15.2f %8zu\n", static_cast<int>(name.size()),
                      name.data(), m.tool_selection, m.param_name, m.param_value, m.format_ok, m.count);
        out += line;
    };
    for (const auto& [scenario, means] : report.per_scenario) row(core::to_string(scenario), means);
    if (report.empty()) {
        out += "(no instances)\n";
    } else {
        row("Overall", report.overall);
    }
    return out;
}

core::Json to_json(const RankAnalysis& analysis) {
    return core::Json{{"consistency", analysis.consistency},
                      {"ordering_accuracy", analysis.ordering_accuracy},
                      {"outputs", analysis.outputs},
                      {"pairs", analysis.pairs}};
}

}  // namespace gentool::metrics
