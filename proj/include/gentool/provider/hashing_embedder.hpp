// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/provider/provider.hpp"

#include <cstdint>

namespace gentool::provider {

inline constexpr std::size_t kOfflineEmbeddingDimension = 256;

// Offline embedding: character 3-grams of the ASCII-lowercased text, padded
// with one space on each side, hashed with 64-bit FNV-1a into `dimension`
// buckets and L2-normalized. Deterministic and dependency free.
class HashingEmbedder final : public Embedder {
public:
    explicit HashingEmbedder(std::size_t dimension = kOfflineEmbeddingDimension);

    [[nodiscard]] std::string backend_id() const override { return "offline-hash"; }
    [[nodiscard]] std::string model_id() const override;
    [[nodiscard]] std::size_t dimension() const { return dimension_; }

protected:
    EmbeddingVector do_embed(std::string_view text) override;

private:
    std::size_t dimension_;
};

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace gentool::provider
