// SPDX-License-Identifier: Apache-2.0
#include "gentool/core/text.hpp"

#include <cctype>

namespace gentool::core {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

char lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string_view trim(std::string_view text) {
    std::size_t begin = 0;
    while (begin < text.size() && is_space(text[begin])) ++begin;
    std::size_t end = text.size();
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : trim(text)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = lower(c);
    return out;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

std::vector<std::string> identifier_tokens(std::string_view identifier) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < identifier.size(); ++i) {
        const char c = identifier[i];
        if (c == '_' || c == '-' || c == '.' || is_space(c)) {
            flush();
            continue;
        }
        if (is_upper(c) && !current.empty()) {
            const char prev = identifier[i - 1];
            const bool next_lower = i + 1 < identifier.size() && is_lower(identifier[i + 1]);
            // "camelCase" splits before C; "HTTPServer" splits before S.
            if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) flush();
        }
        current.push_back(lower(c));
    }
    flush();
    return tokens;
}

bool same_tool_name(std::string_view a, std::string_view b) { return trim(a) == trim(b); }

std::string_view strip_code_fences(std::string_view text) {
    std::string_view body = trim(text);
    if (body.substr(0, 3) != "```") return text;
    const auto first_newline = body.find('\n');
    if (first_newline == std::string_view::npos) return text;
    body.remove_prefix(first_newline + 1);
    const auto closing = body.rfind("```");
    if (closing != std::string_view::npos) body = body.substr(0, closing);
    return trim(body);
}

std::optional<std::string_view> first_balanced_block(std::string_view text, char open) {
    const char close = open == '{' ? '}' : ']';
    const auto start = text.find(open);
    if (start == std::string_view::npos) return std::nullopt;

    // Track both bracket kinds so "{[}" does not count as balanced.
    std::string stack;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_string = true;
                break;
            case '{':
                stack.push_back('}');
                break;
            case '[':
                stack.push_back(']');
                break;
            case '}':
            case ']':
                if (stack.empty() || stack.back() != c) return std::nullopt;
                stack.pop_back();
                if (stack.empty()) {
                    if (c != close) return std::nullopt;
                    return text.substr(start, i - start + 1);
                }
                break;
            default:
                break;
        }
    }
    return std::nullopt;
}

std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string, std::string>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            bool replaced = false;
            for (const auto& [key, value] : values) {
                const std::size_t len = key.size() + 2;
                if (tmpl.size() - i >= len && tmpl[i + len - 1] == '}' &&
                    tmpl.substr(i + 1, key.size()) == key) {
                    out += value;
                    i += len;
                    replaced = true;
                    break;
                }
            }
            if (replaced) continue;
        }
        out.push_back(tmpl[i]);
        ++i;
    }
    return out;
}

}  // namespace gentool::core
