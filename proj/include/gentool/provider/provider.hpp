// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gentool::provider {

// Temperatures used by the synthesis stages when the caller does not override
// them: diverse tool/query generation, deterministic call annotation.
inline constexpr double kCreativeTemperature = 0.7;
inline constexpr double kAnnotationTemperature = 0.0;
inline constexpr int kDefaultMaxTokens = 2048;
inline constexpr std::size_t kDefaultParallelism = 4;

struct GenerationRequest {
    std::string prompt;
    double temperature = kCreativeTemperature;
    int max_tokens = kDefaultMaxTokens;
    std::string model_id = "gpt-4o";
};

// Throws std::invalid_argument on an empty prompt, negative temperature or a
// non-positive token budget.
void check_request(const GenerationRequest& request);

struct EmbeddingVector {
    std::vector<double> values;

    [[nodiscard]] std::size_t dimension() const { return values.size(); }
    [[nodiscard]] double norm() const;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Summation runs in index order
// with commutative products, so cosine(a, b) == cosine(b, a) bit for bit.
// Throws std::invalid_argument on a dimension mismatch and
// DegenerateVectorError when either vector has zero norm.
[[nodiscard]] double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Text generation backend. generate() counts every call that reaches the
// backend and forwards to do_generate().
class TextGenerator {
public:
    virtual ~TextGenerator() = default;

    std::string generate(const GenerationRequest& request);

    [[nodiscard]] virtual std::string backend_id() const = 0;
    [[nodiscard]] std::size_t call_count() const { return calls_.load(); }

protected:
    virtual std::string do_generate(const GenerationRequest& request) = 0;

private:
    std::atomic<std::size_t> calls_{0};
};

class Embedder {
public:
    virtual ~Embedder() = default;

    // Throws std::invalid_argument on empty text.
    EmbeddingVector embed(std::string_view text);

    [[nodiscard]] virtual std::string backend_id() const = 0;
    [[nodiscard]] virtual std::string model_id() const = 0;
    [[nodiscard]] std::size_t call_count() const { return calls_.load(); }

protected:
    virtual EmbeddingVector do_embed(std::string_view text) = 0;

private:
    std::atomic<std::size_t> calls_{0};
};

}  // namespace gentool::provider
