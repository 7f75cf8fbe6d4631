// SPDX-License-Identifier: Apache-2.0
#include "gentool/textio/templates.hpp"

#include <stdexcept>
#include <string>

namespace gentool::textio {

std::string_view template_text(std::string_view file_name) {
    for (const auto& file : template_files()) {
        if (file.file_name == file_name) return file.text;
    }
    throw std::out_of_range("no template named " + std::string(file_name));
}

std::string_view tool_selection_template() { return template_text("tool_selection.txt"); }
std::string_view weak_tool_template() { return template_text("weak_tool_generation.txt"); }
std::string_view query_generation_template() { return template_text("query_generation.txt"); }
std::string_view call_annotation_template() { return template_text("call_annotation.txt"); }
std::string_view annotation_demo_tools() { return template_text("annotation_demo_tool.json"); }

}  // namespace gentool::textio
