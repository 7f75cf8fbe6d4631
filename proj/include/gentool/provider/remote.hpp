// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/provider/provider.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <string>

namespace gentool::provider {

inline constexpr std::string_view kApiKeyVariable = "GENTOOL_API_KEY";

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    double multiplier = 2.0;
    // Replaceable so tests do not sleep for real.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct RemoteConfig {
    // Full URL of the endpoint, e.g. https://api.openai.com/v1/chat/completions.
    std::string url;
    std::string model_id;
    std::optional<std::string> api_key;
    std::chrono::seconds timeout{120};
    RetryPolicy retry;
};

// Reads GENTOOL_API_KEY; nullopt when unset or empty.
[[nodiscard]] std::optional<std::string> api_key_from_environment();

// Splits "scheme://host[:port]/path" into ("scheme://host[:port]", "/path").
// Throws std::invalid_argument when the scheme is not http or https.
[[nodiscard]] std::pair<std::string, std::string> split_url(const std::string& url);

// Chat-completion client:
//   POST {"model", "messages": [{"role": "user", "content": prompt}],
//         "temperature", "max_tokens"}
//   reads choices[0].message.content.
// The request's model_id is used when nonempty, otherwise the configured one.
// Transport errors and 5xx responses are retried per the policy; other HTTP
// errors and malformed bodies raise RemoteError at once; finish_reason
// "length" raises TruncatedError.
class RemoteGenerator final : public TextGenerator {
public:
    explicit RemoteGenerator(RemoteConfig config);

    [[nodiscard]] std::string backend_id() const override { return "remote-chat"; }
    [[nodiscard]] std::size_t http_requests() const { return http_requests_.load(); }

protected:
    std::string do_generate(const GenerationRequest& request) override;

private:
    RemoteConfig config_;
    std::atomic<std::size_t> http_requests_{0};
};

// Embeddings client: POST {"model", "input"}, reads data[0].embedding.
class RemoteEmbedder final : public Embedder {
public:
    explicit RemoteEmbedder(RemoteConfig config);

    [[nodiscard]] std::string backend_id() const override { return "remote-embeddings"; }
    [[nodiscard]] std::string model_id() const override { return config_.model_id; }
    [[nodiscard]] std::size_t http_requests() const { return http_requests_.load(); }

protected:
    EmbeddingVector do_embed(std::string_view text) override;

private:
    RemoteConfig config_;
    std::atomic<std::size_t> http_requests_{0};
};

}  // namespace gentool::provider
