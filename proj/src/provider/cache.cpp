// SPDX-License-Identifier: Apache-2.0
#include "gentool/provider/cache.hpp"

#include "gentool/core/json.hpp"
#include "gentool/provider/digest.hpp"

#include <cstdio>
#include <fstream>

namespace gentool::provider {

namespace {

using core::Json;

void append_field(std::string& buffer, std::string_view field) {
    buffer += std::to_string(field.size());
    buffer.push_back(':');
    buffer.append(field);
}

std::string format_temperature(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

Json payload_to_json(const CachePayload& payload) {
    if (const auto* text = std::get_if<std::string>(&payload)) return Json{{"text", *text}};
    return Json{{"vector", std::get<EmbeddingVector>(payload).values}};
}

std::optional<CachePayload> payload_from_json(const Json& j) {
    if (!j.is_object()) return std::nullopt;
    if (auto it = j.find("text"); it != j.end() && it->is_string()) return CachePayload{it->get<std::string>()};
    if (auto it = j.find("vector"); it != j.end() && it->is_array()) {
        EmbeddingVector v;
        for (const auto& x : *it) {
            if (!x.is_number()) return std::nullopt;
            v.values.push_back(x.get<double>());
        }
        return CachePayload{std::move(v)};
    }
    return std::nullopt;
}

}  // namespace

std::string generation_cache_key(std::string_view backend_id, const GenerationRequest& request) {
    std::string buffer = "generate;";
    append_field(buffer, backend_id);
    append_field(buffer, request.model_id);
    append_field(buffer, format_temperature(request.temperature));
    append_field(buffer, request.prompt);
    return sha256_hex(buffer);
}

std::string embedding_cache_key(std::string_view backend_id, std::string_view model_id, std::string_view text) {
    std::string buffer = "embed;";
    append_field(buffer, backend_id);
    append_field(buffer, model_id);
    append_field(buffer, text);
    return sha256_hex(buffer);
}

ResponseCache::ResponseCache(std::filesystem::path file) : file_(std::move(file)) {
    if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
    std::ifstream in(*file_, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
        const Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("key") || !j["key"].is_string()) continue;
        if (auto payload = payload_from_json(j.value("payload", Json()))) {
            entries_.insert_or_assign(j["key"].get<std::string>(), std::move(*payload));
        }
    }
}

std::optional<CachePayload> ResponseCache::lookup(const std::string& key) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResponseCache::store(const CacheEntry& entry) {
    std::lock_guard lock(mutex_);
    entries_.insert_or_assign(entry.key, entry.payload);
    if (!file_) return;
    const auto seconds =
        std::chrono::duration_cast<std::chrono::seconds>(entry.created_at.time_since_epoch()).count();
    const Json line{{"key", entry.key}, {"created_at", seconds}, {"payload", payload_to_json(entry.payload)}};
    std::ofstream out(*file_, std::ios::binary | std::ios::app);
    out << core::dump_line(line) << '\n';
    out.flush();
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

CachingGenerator::CachingGenerator(std::shared_ptr<TextGenerator> inner, std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::string CachingGenerator::do_generate(const GenerationRequest& request) {
    const std::string key = generation_cache_key(inner_->backend_id(), request);
    if (auto hit = cache_->lookup(key)) {
        if (const auto* text = std::get_if<std::string>(&*hit)) {
            ++hits_;
            return *text;
        }
    }
    std::string text = inner_->generate(request);
    cache_->store({key, text, std::chrono::system_clock::now()});
    return text;
}

CachingEmbedder::CachingEmbedder(std::shared_ptr<Embedder> inner, std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

EmbeddingVector CachingEmbedder::do_embed(std::string_view text) {
    const std::string key = embedding_cache_key(inner_->backend_id(), inner_->model_id(), text);
    if (auto hit = cache_->lookup(key)) {
        if (const auto* v = std::get_if<EmbeddingVector>(&*hit)) {
            ++hits_;
            return *v;
        }
    }
    EmbeddingVector v = inner_->embed(text);
    cache_->store({key, v, std::chrono::system_clock::now()});
    return v;
}

}  // namespace gentool::provider
