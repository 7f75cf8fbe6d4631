// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gentool::core {

[[nodiscard]] std::string_view trim(std::string_view text);

// Collapses runs of ASCII whitespace to one space and trims the ends.
[[nodiscard]] std::string normalize_whitespace(std::string_view text);

// ASCII case folding; bytes >= 0x80 pass through unchanged.
[[nodiscard]] std::string fold_case(std::string_view text);

// Number of maximal runs of non-whitespace bytes.
[[nodiscard]] std::size_t word_count(std::string_view text);

// Splits an identifier on '_', '-', '.', spaces and lower-to-upper camel-case
// boundaries, returning lowercase tokens: "apartmentID" -> {"apartment", "id"}.
[[nodiscard]] std::vector<std::string> identifier_tokens(std::string_view identifier);

// Tool names compare case-sensitively after trimming.
[[nodiscard]] bool same_tool_name(std::string_view a, std::string_view b);

// Removes a surrounding markdown code fence (```lang ... ```) if the text,
// once trimmed, starts with one. Returns the text unchanged otherwise.
[[nodiscard]] std::string_view strip_code_fences(std::string_view text);

// Returns the first balanced {...} (open == '{') or [...] (open == '[') block
// in text. Brackets inside JSON string literals are ignored. nullopt when no
// opening bracket exists or the first one is never closed.
[[nodiscard]] std::optional<std::string_view> first_balanced_block(std::string_view text, char open);

// Replaces every "{key}" placeholder from the given list. Other braces are
// left alone, so JSON in templates survives.
[[nodiscard]] std::string fill_template(std::string_view tmpl,
                                        const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace gentool::core
