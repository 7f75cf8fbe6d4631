// SPDX-License-Identifier: Apache-2.0
// Reference implementations used only by tests. None of them share code with
// the library; each is written the slow, obvious way.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

// Memoized recursive edit distance over code points.
std::size_t levenshtein(const std::u32string& a, const std::u32string& b);

// 1 - d / max(len); 1 for two empty strings.
double normalized_levenshtein(const std::u32string& a, const std::u32string& b);

// Strict UTF-8 to code points; only for valid input.
std::u32string utf32(const std::string& utf8);

// F1 over key sets with the both-empty = 1 convention.
double key_f1(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

// Whitespace-separated token count via stream extraction.
std::size_t words(const std::string& text);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Count of train vectors whose cosine with `test` exceeds the threshold,
// computed from scratch for every pair.
std::size_t related_count(const std::vector<std::vector<double>>& train, const std::vector<double>& test,
                          double threshold);

// Checks a ranking label against the three labeling cases without rebuilding
// it: the leading block must be exactly the given useful tools, the sentinel
// must follow them, and the tail must be the remaining names in sorted order.
// Returns a reason on mismatch.
std::optional<std::string> check_rank_label(const std::vector<std::string>& label,
                                            const std::vector<std::string>& toolset_names,
                                            const std::optional<std::string>& gold,
                                            const std::optional<std::string>& weak);

}  // namespace oracle
