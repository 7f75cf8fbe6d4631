// SPDX-License-Identifier: Apache-2.0
#include "gentool/provider/mock_generator.hpp"

#include "gentool/core/json.hpp"
#include "gentool/core/text.hpp"
#include "gentool/provider/hashing_embedder.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace gentool::provider {

using core::Json;

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) return 0;
    return static_cast<std::size_t>(rng() % n);
}

namespace mock {

namespace {

constexpr std::array kCities = {"Berlin", "Lisbon", "Osaka", "Toronto", "Nairobi", "Santiago", "Oslo", "Hanoi",
                                "Denver", "Krakow", "Melbourne", "Cairo"};
constexpr std::array kNames = {"Alice Moreau", "Ravi Patel", "Chen Wei", "Maria Lopez", "Tom Baker", "Amina Yusuf",
                               "Lars Berg", "Keiko Sato"};
constexpr std::array kWords = {"amber", "river",  "summit", "harbor", "maple",   "orbit", "cedar",  "lantern",
                               "violet", "meadow", "copper", "falcon", "granite", "coral", "willow", "quartz"};
constexpr std::array kTopics = {"I need help with {topic}: {mentions}.",
                                "Can you handle {topic} for me with {mentions}?",
                                "Please take care of {topic} using {mentions}.",
                                "Could you look into {topic}? Use {mentions}.",
                                "Help me with {topic}, given {mentions}.",
                                "I would like to arrange {topic} with {mentions}.",
                                "Run {topic} where {mentions} apply.",
                                "Set up {topic} for {mentions}, please."};
constexpr std::array kPrefixes = {"simple", "basic", "lite", "quick", "mini"};

bool has_token(const std::vector<std::string>& tokens, std::initializer_list<std::string_view> wanted) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
        return std::find(wanted.begin(), wanted.end(), t) != wanted.end();
    });
}

std::string two_digits(std::size_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02zu", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string topic_of(const core::ToolSpec& tool) {
    auto tokens = core::identifier_tokens(tool.name);
    if (tokens.empty()) return "this task";
    return "the " + join(tokens, " ");
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
    for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
        text.replace(pos, from.size(), to);
    }
    return text;
}

std::string mention_list(const std::vector<std::string>& mentions) {
    if (mentions.size() <= 1) return mentions.empty() ? std::string() : mentions.front();
    std::vector<std::string> head(mentions.begin(), mentions.end() - 1);
    return join(head, ", ") + " and " + mentions.back();
}

std::string longest_alpha_word(std::string_view query) {
    std::string best;
    std::string current;
    auto flush = [&] {
        if (current.size() > best.size()) best = current;
        current.clear();
    };
    for (char c : query) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
            current.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return best;
}

std::vector<std::size_t> proper_subset(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> keep;
    if (n < 2) {
        for (std::size_t i = 0; i < n; ++i) keep.push_back(i);
        return keep;
    }
    const std::size_t size = 1 + draw(rng, n - 1);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[draw(rng, i + 1)]);
    keep.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(keep.begin(), keep.end());
    return keep;
}

}  // namespace

std::string argument_phrase(const core::ParameterSpec& param) {
    std::string phrase = core::normalize_whitespace(core::fold_case(param.description));
    phrase.erase(std::remove(phrase.begin(), phrase.end(), '"'), phrase.end());
    while (!phrase.empty() && (phrase.back() == '.' || phrase.back() == ' ')) phrase.pop_back();
    for (std::string_view article : {"the ", "a ", "an "}) {
        if (phrase.rfind(article, 0) == 0) {
            phrase.erase(0, article.size());
            break;
        }
    }
    if (phrase.empty() || core::word_count(phrase) > 6) phrase = join(core::identifier_tokens(param.name), " ");
    if (phrase.empty()) phrase = "value";
    return phrase;
}

std::string value_for(const core::ParameterSpec& param, std::mt19937_64& rng) {
    const auto tokens = core::identifier_tokens(param.name);
    if (has_token(tokens, {"date", "day", "checkin", "checkout", "birthday"})) {
        return "2024-" + two_digits(1 + draw(rng, 12)) + "-" + two_digits(1 + draw(rng, 28));
    }
    if (has_token(tokens, {"time", "hour"})) return two_digits(draw(rng, 24)) + ":" + two_digits(draw(rng, 4) * 15);
    if (has_token(tokens, {"email"})) return std::string(kWords[draw(rng, kWords.size())]) + "@example.com";
    if (has_token(tokens, {"city", "location", "destination", "origin", "address", "place", "from", "to"})) {
        return kCities[draw(rng, kCities.size())];
    }
    if (has_token(tokens, {"name", "user", "username", "passenger", "customer", "contact", "author"})) {
        return kNames[draw(rng, kNames.size())];
    }
    if (has_token(tokens, {"id", "code", "number", "ref", "reference"})) {
        std::string code;
        for (int i = 0; i < 3; ++i) code.push_back(static_cast<char>('A' + draw(rng, 26)));
        for (int i = 0; i < 3; ++i) code.push_back(static_cast<char>('0' + draw(rng, 10)));
        return code;
    }
    if (has_token(tokens, {"count", "amount", "price", "quantity", "age", "days", "nights", "guests", "limit",
                           "size", "budget", "year"})) {
        return std::to_string(1 + draw(rng, 500));
    }
    return std::string(kWords[draw(rng, kWords.size())]) + " " + kWords[draw(rng, kWords.size())];
}

std::string query_for(const core::ToolSpec& tool, std::mt19937_64& rng) {
    std::vector<std::string> mentions;
    for (const auto& param : tool.parameters) {
        mentions.push_back("the " + argument_phrase(param) + " \"" + value_for(param, rng) + "\"");
    }
    const std::string topic = topic_of(tool);
    if (mentions.empty()) return "Please run " + topic + " now.";
    std::string text = kTopics[draw(rng, kTopics.size())];
    text = replace_all(text, "{topic}", topic);
    return replace_all(text, "{mentions}", mention_list(mentions));
}

core::ToolCall annotate(std::string_view query, const core::ToolSpec& tool) {
    core::ToolCall call{tool.name, {}};
    const std::string folded = core::fold_case(query);
    for (const auto& param : tool.parameters) {
        const std::string needle = "the " + argument_phrase(param) + " \"";
        const std::size_t at = folded.find(needle);
        if (at != std::string::npos) {
            const std::size_t begin = at + needle.size();
            const std::size_t end = query.find('"', begin);
            if (end != std::string_view::npos) {
                call.arguments.emplace_back(param.name, std::string(query.substr(begin, end - begin)));
                continue;
            }
        }
        if (param.required) {
            std::string fallback = longest_alpha_word(query);
            if (fallback.empty()) fallback = std::string(core::trim(query));
            call.arguments.emplace_back(param.name, std::move(fallback));
        }
    }
    return call;
}

core::ToolSpec weaken(const core::ToolSpec& tool, const std::vector<std::string>& taken, std::mt19937_64& rng) {
    core::ToolSpec weak;
    const std::size_t start = draw(rng, kPrefixes.size());
    auto is_taken = [&](const std::string& name) {
        return name == tool.name || std::find(taken.begin(), taken.end(), name) != taken.end();
    };
    for (std::size_t i = 0; i < kPrefixes.size() && weak.name.empty(); ++i) {
        std::string candidate = std::string(kPrefixes[(start + i) % kPrefixes.size()]) + "_" + tool.name;
        if (!is_taken(candidate)) weak.name = std::move(candidate);
    }
    for (std::size_t n = 2; weak.name.empty(); ++n) {
        std::string candidate = std::string(kPrefixes[start]) + "_" + tool.name + "_" + std::to_string(n);
        if (!is_taken(candidate)) weak.name = std::move(candidate);
    }

    std::vector<std::string> words;
    std::string current;
    for (char c : tool.description + " ") {
        if (c == ' ' || c == '\n' || c == '\t') {
            if (!current.empty() && words.size() < 6) words.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    weak.description = "Simplified tool: " + (words.empty() ? tool.name : join(words, " "));

    for (std::size_t i : proper_subset(tool.parameters.size(), rng)) weak.parameters.push_back(tool.parameters[i]);
    for (std::size_t i : proper_subset(tool.returns.size(), rng)) weak.returns.push_back(tool.returns[i]);
    if (weak.returns.empty()) weak.returns.push_back({"result", "Outcome of the request"});
    return weak;
}

}  // namespace mock

namespace {

constexpr std::string_view kWeakToolOpening = "You are a professional tool creation assistant";
constexpr std::string_view kQueryOpening = "You are a professional question generation assistant";
constexpr std::string_view kAnnotationOpening = "You are a professional tool matching assistant";

// Text between the last occurrence of `begin` and the next `end` after it.
std::string_view section(std::string_view prompt, std::string_view begin, std::string_view end) {
    const std::size_t at = prompt.rfind(begin);
    if (at == std::string_view::npos) return {};
    const std::size_t from = at + begin.size();
    const std::size_t to = end.empty() ? std::string_view::npos : prompt.find(end, from);
    return core::trim(prompt.substr(from, to == std::string_view::npos ? std::string_view::npos : to - from));
}

std::optional<core::ToolSpec> first_tool(std::string_view block) {
    const std::size_t brace = block.find('{');
    const std::size_t bracket = block.find('[');
    const char open = bracket != std::string_view::npos && (brace == std::string_view::npos || bracket < brace) ? '['
                                                                                                             : '{';
    const auto json_text = core::first_balanced_block(block, open);
    if (!json_text) return std::nullopt;
    Json j = Json::parse(*json_text, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    if (j.is_array()) {
        if (j.empty()) return std::nullopt;
        j = j.front();
    }
    try {
        return core::tool_from_json(j);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<std::string> avoided_names(std::string_view prompt) {
    std::vector<std::string> names;
    const std::size_t at = prompt.rfind(mock::kAvoidNamesNote);
    if (at == std::string_view::npos) return names;
    std::string_view rest = prompt.substr(at + mock::kAvoidNamesNote.size());
    rest = rest.substr(0, rest.find('\n'));
    while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        const auto item = core::trim(rest.substr(0, comma));
        if (!item.empty()) names.emplace_back(item);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return names;
}

std::string escape_single_quoted(std::string_view value) {
    std::string out;
    for (char c : value) {
        if (c == '\\' || c == '\'') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string render_plan(const core::ToolCall& call) {
    std::string out = call.tool_name + "(";
    for (std::size_t i = 0; i < call.arguments.size(); ++i) {
        if (i) out += ", ";
        out += call.arguments[i].first + "='" + escape_single_quoted(call.arguments[i].second) + "'";
    }
    return out + ")";
}

std::string maybe_fence(std::string text, std::mt19937_64& rng) {
    if (draw(rng, 4) == 0) return "```json\n" + text + "\n```";
    return text;
}

}  // namespace

std::string MockGenerator::do_generate(const GenerationRequest& request) {
    char temperature[64];
    std::snprintf(temperature, sizeof temperature, "%.17g", request.temperature);
    const std::string material = std::to_string(seed_) + '\x1f' + request.model_id + '\x1f' + temperature + '\x1f' +
                                 request.prompt;
    std::mt19937_64 rng(fnv1a64(material));

    const std::string_view prompt = core::trim(request.prompt);
    if (prompt.rfind(kWeakToolOpening, 0) == 0) {
        const auto strong = first_tool(section(prompt, "#existing tools#:", "#new tool#"));
        if (!strong) return "I could not find the existing tool.";
        const core::ToolSpec weak = mock::weaken(*strong, avoided_names(prompt), rng);
        return maybe_fence(core::dump_pretty(core::to_json(weak)), rng);
    }
    if (prompt.rfind(kQueryOpening, 0) == 0) {
        const auto strong = first_tool(section(prompt, "#strong tool sets#:", "#output#:"));
        if (!strong) return "[]";
        Json list = Json::array();
        for (int i = 0; i < 10; ++i) list.push_back(mock::query_for(*strong, rng));
        return maybe_fence(core::dump_pretty(list), rng);
    }
    if (prompt.rfind(kAnnotationOpening, 0) == 0) {
        const auto tool = first_tool(section(prompt, "#toolsets#:", "#output#:"));
        const std::string query(section(prompt, "#user query#:", "#toolsets#:"));
        if (!tool) return "generate_response()";
        return render_plan(mock::annotate(query, *tool));
    }
    return "I can help with that request.";
}

}  // namespace gentool::provider
