// SPDX-License-Identifier: Apache-2.0
#include "gentool/provider/hashing_embedder.hpp"

#include "gentool/core/text.hpp"

#include <cmath>
#include <stdexcept>

namespace gentool::provider {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

HashingEmbedder::HashingEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::string HashingEmbedder::model_id() const { return "char3-fnv1a-" + std::to_string(dimension_); }

EmbeddingVector HashingEmbedder::do_embed(std::string_view text) {
    const std::string padded = " " + core::fold_case(text) + " ";
    EmbeddingVector v;
    v.values.assign(dimension_, 0.0);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        v.values[fnv1a64(std::string_view(padded).substr(i, 3)) % dimension_] += 1.0;
    }
    const double n = v.norm();
    for (double& x : v.values) x /= n;
    return v;
}

}  // namespace gentool::provider
