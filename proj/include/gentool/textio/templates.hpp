// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

namespace gentool::textio {

struct TemplateFile {
    std::string_view file_name;
    std::string_view sha256;  // as recorded in templates/SHA256SUMS
    std::string_view text;
};

// Every shipped template, embedded at build time.
[[nodiscard]] const std::vector<TemplateFile>& template_files();

// Throws std::out_of_range for an unknown file name.
[[nodiscard]] std::string_view template_text(std::string_view file_name);

// Two-task ranking/invocation prompt. Placeholders: {input_query}, {tools}.
[[nodiscard]] std::string_view tool_selection_template();
// Weak tool creation. Placeholders: {user_query}, {ex_tools}.
[[nodiscard]] std::string_view weak_tool_template();
// Query generation. Placeholders: {weak}, {strong}.
[[nodiscard]] std::string_view query_generation_template();
// Call annotation. Placeholders: {demons_example_tool_set}, {query}, {tools}.
[[nodiscard]] std::string_view call_annotation_template();
// Toolset shown in the annotation demonstration.
[[nodiscard]] std::string_view annotation_demo_tools();

}  // namespace gentool::textio
