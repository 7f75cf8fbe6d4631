// SPDX-License-Identifier: Apache-2.0
#include <httplib.h>

#include "gentool/provider/remote.hpp"

#include "gentool/core/json.hpp"
#include "gentool/error.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace gentool::provider {

using core::Json;

namespace {

// Sends one JSON POST, retrying transport failures and 5xx answers.
Json post_json(const RemoteConfig& config, const Json& body, std::atomic<std::size_t>& counter) {
    const auto [origin, path] = split_url(config.url);
    httplib::Client client(origin);
    client.set_connection_timeout(config.timeout);
    client.set_read_timeout(config.timeout);
    client.set_write_timeout(config.timeout);

    httplib::Headers headers;
    if (config.api_key) headers.emplace("Authorization", "Bearer " + *config.api_key);
    const std::string payload = core::dump_line(body);

    const int attempts = std::max(1, config.retry.attempts);
    auto backoff = config.retry.initial_backoff;
    std::string last_failure;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        ++counter;
        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_failure = "transport error: " + httplib::to_string(result.error());
        } else if (result->status >= 500) {
            last_failure = "server returned HTTP " + std::to_string(result->status);
        } else if (result->status < 200 || result->status >= 300) {
            throw RemoteError("request to " + config.url + " failed with HTTP " + std::to_string(result->status) +
                              ": " + result->body.substr(0, 200));
        } else {
            Json parsed = Json::parse(result->body, nullptr, false);
            if (parsed.is_discarded() || !parsed.is_object()) {
                throw RemoteError("response from " + config.url + " is not a JSON object");
            }
            return parsed;
        }
        if (attempt < attempts) {
            if (config.retry.sleep) {
                config.retry.sleep(backoff);
            } else {
                std::this_thread::sleep_for(backoff);
            }
            backoff = std::chrono::milliseconds(
                static_cast<std::chrono::milliseconds::rep>(backoff.count() * config.retry.multiplier));
        }
    }
    throw RemoteError("request to " + config.url + " failed after " + std::to_string(attempts) +
                      " attempts: " + last_failure);
}

}  // namespace

std::optional<std::string> api_key_from_environment() {
    const char* value = std::getenv(std::string(kApiKeyVariable).c_str());
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
}

std::pair<std::string, std::string> split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("URL without scheme: " + url);
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + scheme);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

RemoteGenerator::RemoteGenerator(RemoteConfig config) : config_(std::move(config)) {
    (void)split_url(config_.url);
}

std::string RemoteGenerator::do_generate(const GenerationRequest& request) {
    const std::string model = request.model_id.empty() ? config_.model_id : request.model_id;
    const Json body{{"model", model},
                    {"messages", Json::array({Json{{"role", "user"}, {"content", request.prompt}}})},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_tokens}};
    const Json response = post_json(config_, body, http_requests_);

    const auto choices = response.find("choices");
    if (choices == response.end() || !choices->is_array() || choices->empty()) {
        throw RemoteError("chat response has no choices");
    }
    const Json& choice = choices->front();
    if (choice.value("finish_reason", Json()).is_string() && choice["finish_reason"] == "length") {
        throw TruncatedError("generation stopped at the token limit (" + std::to_string(request.max_tokens) + ")");
    }
    const Json content = choice.value("message", Json::object()).value("content", Json());
    if (!content.is_string()) throw RemoteError("chat response has no message content");
    return content.get<std::string>();
}

RemoteEmbedder::RemoteEmbedder(RemoteConfig config) : config_(std::move(config)) {
    (void)split_url(config_.url);
}

EmbeddingVector RemoteEmbedder::do_embed(std::string_view text) {
    const Json body{{"model", config_.model_id}, {"input", std::string(text)}};
    const Json response = post_json(config_, body, http_requests_);

    const auto data = response.find("data");
    if (data == response.end() || !data->is_array() || data->empty() || !data->front().is_object()) {
        throw RemoteError("embedding response has no data");
    }
    const Json embedding = data->front().value("embedding", Json());
    if (!embedding.is_array() || embedding.empty()) throw RemoteError("embedding response has no vector");
    EmbeddingVector v;
    v.values.reserve(embedding.size());
    for (const auto& x : embedding) {
        if (!x.is_number()) throw RemoteError("embedding vector holds a non-number");
        v.values.push_back(x.get<double>());
    }
    return v;
}

}  // namespace gentool::provider
