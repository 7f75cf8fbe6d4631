// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/types.hpp"
#include "gentool/provider/provider.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gentool::provider {

// Offline stand-in for the hosted chat model. Recognizes the three synthesis
// prompts (weak-tool creation, query generation, call annotation) by their
// opening sentence, reads the tools and query embedded in the prompt and
// answers in the format the prompt asks for. Output is a pure function of
// (seed, model id, temperature, prompt).
//
// Conventions shared with the mock seed corpus: queries mention each
// argument as `the <parameter description> "<value>"`, and the annotator
// recovers values by searching for that pattern, so annotated values are
// substrings of the query.
class MockGenerator final : public TextGenerator {
public:
    explicit MockGenerator(std::uint64_t seed) : seed_(seed) {}

    [[nodiscard]] std::string backend_id() const override { return "mock"; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

protected:
    std::string do_generate(const GenerationRequest& request) override;

private:
    std::uint64_t seed_;
};

// Deterministic bounded draw: rng() % n. std::uniform_int_distribution is
// implementation defined, which would make corpora differ across standard
// libraries.
[[nodiscard]] std::size_t draw(std::mt19937_64& rng, std::size_t n);

namespace mock {

// Line appended to a weak-tool prompt when earlier answers must not be
// repeated; followed by a comma-separated list of names.
inline constexpr std::string_view kAvoidNamesNote = "Do not reuse these tool names: ";

// Phrase naming an argument inside a query: the lowercased parameter
// description, or the name's tokens when the description is empty.
[[nodiscard]] std::string argument_phrase(const core::ParameterSpec& param);

// A plausible value for the parameter, shaped by its name (dates, times,
// places, codes, amounts...). Never contains a double quote.
[[nodiscard]] std::string value_for(const core::ParameterSpec& param, std::mt19937_64& rng);

// A request that mentions every parameter of the tool as
// `the <phrase> "<value>"`.
[[nodiscard]] std::string query_for(const core::ToolSpec& tool, std::mt19937_64& rng);

// Recovers one argument per parameter whose `the <phrase> "` pattern occurs
// in the query. Required parameters without a match fall back to the longest
// alphabetic word of the query, so every required key is filled with a
// substring of the query.
[[nodiscard]] core::ToolCall annotate(std::string_view query, const core::ToolSpec& tool);

// A reduced variant of the tool: prefixed name not in `taken`, shorter
// description, a proper subset of parameters and of return fields whenever
// there are at least two to choose from.
[[nodiscard]] core::ToolSpec weaken(const core::ToolSpec& tool, const std::vector<std::string>& taken,
                                    std::mt19937_64& rng);

}  // namespace mock

}  // namespace gentool::provider
