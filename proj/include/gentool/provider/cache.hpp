// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/provider/provider.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>

namespace gentool::provider {

using CachePayload = std::variant<std::string, EmbeddingVector>;

struct CacheEntry {
    std::string key;
    CachePayload payload;
    std::chrono::system_clock::time_point created_at;
};

// Key for a generation: digest over backend id, model id, temperature and
// prompt, length-prefixed so field boundaries cannot alias.
[[nodiscard]] std::string generation_cache_key(std::string_view backend_id, const GenerationRequest& request);
[[nodiscard]] std::string embedding_cache_key(std::string_view backend_id, std::string_view model_id,
                                              std::string_view text);

// Content-addressed response cache. With a file path it is persisted as
// append-only JSONL and reloaded on construction, so interrupted runs resume;
// a truncated final line from an interrupted write is ignored. Thread safe.
class ResponseCache {
public:
    ResponseCache() = default;
    explicit ResponseCache(std::filesystem::path file);

    ResponseCache(const ResponseCache&) = delete;
    ResponseCache& operator=(const ResponseCache&) = delete;

    [[nodiscard]] std::optional<CachePayload> lookup(const std::string& key) const;
    void store(const CacheEntry& entry);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] const std::optional<std::filesystem::path>& file() const { return file_; }

private:
    std::optional<std::filesystem::path> file_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CachePayload> entries_;
};

// Serves repeated requests from the cache; misses go to the wrapped backend.
class CachingGenerator final : public TextGenerator {
public:
    CachingGenerator(std::shared_ptr<TextGenerator> inner, std::shared_ptr<ResponseCache> cache);

    [[nodiscard]] std::string backend_id() const override { return inner_->backend_id(); }
    [[nodiscard]] std::size_t hits() const { return hits_.load(); }
    [[nodiscard]] TextGenerator& inner() { return *inner_; }

protected:
    std::string do_generate(const GenerationRequest& request) override;

private:
    std::shared_ptr<TextGenerator> inner_;
    std::shared_ptr<ResponseCache> cache_;
    std::atomic<std::size_t> hits_{0};
};

class CachingEmbedder final : public Embedder {
public:
    CachingEmbedder(std::shared_ptr<Embedder> inner, std::shared_ptr<ResponseCache> cache);

    [[nodiscard]] std::string backend_id() const override { return inner_->backend_id(); }
    [[nodiscard]] std::string model_id() const override { return inner_->model_id(); }
    [[nodiscard]] std::size_t hits() const { return hits_.load(); }
    [[nodiscard]] Embedder& inner() { return *inner_; }

protected:
    EmbeddingVector do_embed(std::string_view text) override;

private:
    std::shared_ptr<Embedder> inner_;
    std::shared_ptr<ResponseCache> cache_;
    std::atomic<std::size_t> hits_{0};
};

}  // namespace gentool::provider
