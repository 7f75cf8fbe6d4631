// SPDX-License-Identifier: Apache-2.0
#include "gentool/textio/textio.hpp"

#include "gentool/core/text.hpp"
#include "gentool/textio/templates.hpp"

#include <algorithm>
#include <set>

namespace gentool::textio {

using core::Json;

std::string render_toolset(const std::vector<core::ToolSpec>& tools) {
    return core::dump_pretty(core::tools_to_json(tools));
}

PromptBundle prompt_bundle(const core::TrainingInstance& instance) {
    const std::string_view tmpl = tool_selection_template();
    const std::size_t query_line = tmpl.find("Query: {input_query}");
    PromptBundle bundle;
    bundle.system_and_task_text = std::string(tmpl.substr(0, query_line));
    bundle.query_block = "Query: " + instance.query;
    bundle.toolset_block = render_toolset(instance.toolset);
    return bundle;
}

std::string render_prompt(const core::TrainingInstance& instance) {
    return core::fill_template(tool_selection_template(),
                               {{"input_query", instance.query}, {"tools", render_toolset(instance.toolset)}});
}

std::string render_invocation(const core::ToolCall& call) {
    std::string out = call.tool_name + "(";
    for (std::size_t i = 0; i < call.arguments.size(); ++i) {
        if (i) out += ", ";
        out += core::dump_line(Json(call.arguments[i].first));
        out += '=';
        out += core::dump_line(Json(call.arguments[i].second));
    }
    return out + ")";
}

std::string render_gold(const core::TrainingInstance& instance) {
    std::string out = "{" + core::dump_line(Json(std::string(kFirstTaskKey))) + ": [";
    for (std::size_t i = 0; i < instance.rank_label.size(); ++i) {
        if (i) out += ", ";
        out += core::dump_line(Json(instance.rank_label[i]));
    }
    out += "], " + core::dump_line(Json(std::string(kSecondTaskKey))) + ": [";
    out += core::dump_line(Json(render_invocation(instance.gold_call)));
    return out + "]}";
}

Json render_row(const core::TrainingInstance& instance) {
    return Json{{"instance_id", instance.id}, {"prompt", render_prompt(instance)}, {"gold", render_gold(instance)}};
}

core::TextRenderer text_renderer() { return {render_prompt, render_gold}; }

namespace {

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    [[nodiscard]] bool done() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return done() ? '\0' : text_[pos_]; }

    void skip_space() {
        while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) ++pos_;
    }

    bool accept(char c) {
        if (peek() != c || done()) return false;
        ++pos_;
        return true;
    }

    std::optional<std::string> identifier() {
        const std::size_t start = pos_;
        while (!done() && is_identifier_char(peek())) ++pos_;
        if (pos_ == start) return std::nullopt;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::optional<std::string> quoted() {
        const char quote = peek();
        if (quote != '"' && quote != '\'') return std::nullopt;
        ++pos_;
        std::string out;
        while (!done()) {
            const char c = text_[pos_++];
            if (c == quote) return out;
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            if (done()) return std::nullopt;
            const char e = text_[pos_++];
            switch (e) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case 'u':
                    if (!unicode_escape(out)) return std::nullopt;
                    break;
                default: out.push_back(e); break;
            }
        }
        return std::nullopt;
    }

    std::optional<std::string> number() {
        const std::size_t start = pos_;
        accept('-');
        if (!digits()) {
            pos_ = start;
            return std::nullopt;
        }
        if (accept('.') && !digits()) {
            pos_ = start;
            return std::nullopt;
        }
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (!accept('+')) accept('-');
            if (!digits()) {
                pos_ = start;
                return std::nullopt;
            }
        }
        if (is_identifier_char(peek())) {
            pos_ = start;
            return std::nullopt;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

private:
    static bool is_identifier_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
               c == '.';
    }

    bool digits() {
        const std::size_t start = pos_;
        while (!done() && peek() >= '0' && peek() <= '9') ++pos_;
        return pos_ > start;
    }

    std::optional<unsigned> hex4() {
        if (text_.size() - pos_ < 4) return std::nullopt;
        unsigned v = 0;
        for (int i = 0; i < 4; ++i) {
            const char c = text_[pos_++];
            v <<= 4;
            if (c >= '0' && c <= '9') {
                v |= static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                v |= static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                v |= static_cast<unsigned>(c - 'A' + 10);
            } else {
                return std::nullopt;
            }
        }
        return v;
    }

    bool unicode_escape(std::string& out) {
        auto high = hex4();
        if (!high) return false;
        unsigned cp = *high;
        if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (text_.substr(pos_, 2) != "\\u") return false;
            pos_ += 2;
            auto low = hex4();
            if (!low || *low < 0xDC00 || *low > 0xDFFF) return false;
            cp = 0x10000 + ((cp - 0xD800) << 10) + (*low - 0xDC00);
        } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            return false;
        }
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
        return true;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<core::ToolCall> one_invocation(Scanner& in) {
    core::ToolCall call;
    auto name = (in.peek() == '"' || in.peek() == '\'') ? in.quoted() : in.identifier();
    if (!name) return std::nullopt;
    call.tool_name = std::string(core::trim(*name));
    if (call.tool_name.empty()) return std::nullopt;
    in.skip_space();
    if (!in.accept('(')) return std::nullopt;
    in.skip_space();
    if (in.accept(')')) return call;
    std::set<std::string> seen;
    for (;;) {
        in.skip_space();
        auto key = (in.peek() == '"' || in.peek() == '\'') ? in.quoted() : in.identifier();
        if (!key || key->empty() || !seen.insert(*key).second) return std::nullopt;
        in.skip_space();
        if (!in.accept('=')) return std::nullopt;
        in.skip_space();
        auto value = (in.peek() == '"' || in.peek() == '\'') ? in.quoted() : in.number();
        if (!value) return std::nullopt;
        call.arguments.emplace_back(std::move(*key), std::move(*value));
        in.skip_space();
        if (in.accept(')')) return call;
        if (!in.accept(',')) return std::nullopt;
    }
}

}  // namespace

std::optional<std::vector<core::ToolCall>> parse_invocations(std::string_view text) {
    Scanner in(text);
    std::vector<core::ToolCall> calls;
    in.skip_space();
    while (!in.done()) {
        auto call = one_invocation(in);
        if (!call) return std::nullopt;
        calls.push_back(std::move(*call));
        in.skip_space();
        while (in.accept(',') || in.accept(';')) in.skip_space();
    }
    if (calls.empty()) return std::nullopt;
    return calls;
}

std::optional<core::ToolCall> parse_invocation(std::string_view text) {
    auto calls = parse_invocations(text);
    if (!calls || calls->size() != 1) return std::nullopt;
    return std::move(calls->front());
}

bool same_invocation(const core::ToolCall& a, const core::ToolCall& b) {
    if (!core::same_tool_name(a.tool_name, b.tool_name)) return false;
    auto sorted = [](std::vector<core::Argument> args) {
        std::sort(args.begin(), args.end());
        return args;
    };
    return sorted(a.arguments) == sorted(b.arguments);
}

core::RankedOutput parse_model_output(std::string_view text) {
    core::RankedOutput out;
    out.raw_text = std::string(text);
    try {
        const auto block = core::first_balanced_block(text, '{');
        if (!block) return out;
        const Json j = Json::parse(*block, nullptr, false);
        if (j.is_discarded() || !j.is_object() || j.size() != 2) return out;

        const Json* first = nullptr;
        const Json* second = nullptr;
        for (const auto& [key, value] : j.items()) {
            if (key.rfind(kFirstTaskKey, 0) == 0 && !first) {
                first = &value;
            } else if (key.rfind(kSecondTaskKey, 0) == 0 && !second) {
                second = &value;
            }
        }
        if (!first || !second || !first->is_array() || !second->is_array() || second->empty()) return out;

        std::vector<std::string> ranking;
        for (const auto& item : *first) {
            if (!item.is_string()) return out;
            std::string_view name = core::trim(item.get_ref<const std::string&>());
            if (name.size() >= 2 && name.substr(name.size() - 2) == "()") name.remove_suffix(2);
            ranking.emplace_back(core::trim(name));
        }

        std::optional<core::ToolCall> invocation;
        for (const auto& item : *second) {
            if (!item.is_string()) return out;
            auto calls = parse_invocations(item.get_ref<const std::string&>());
            if (!calls) return out;
            for (auto& call : *calls) {
                if (!invocation) {
                    invocation = std::move(call);
                } else if (!same_invocation(*invocation, call)) {
                    return out;
                }
            }
        }
        out.ranking = std::move(ranking);
        out.invocation = std::move(*invocation);
        out.parse_ok = true;
    } catch (const std::exception&) {
        out.ranking.clear();
        out.invocation = {};
        out.parse_ok = false;
    }
    return out;
}

}  // namespace gentool::textio
