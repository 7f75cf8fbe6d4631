// SPDX-License-Identifier: Apache-2.0
#include "gentool/provider/provider.hpp"

#include "gentool/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gentool::provider {

void check_request(const GenerationRequest& request) {
    if (request.prompt.empty()) throw std::invalid_argument("generation request has an empty prompt");
    if (!(request.temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    if (request.max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
}

double EmbeddingVector::norm() const {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("cosine of vectors with dimensions " + std::to_string(a.dimension()) +
                                    " and " + std::to_string(b.dimension()));
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw DegenerateVectorError("cosine of a zero vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

std::string TextGenerator::generate(const GenerationRequest& request) {
    check_request(request);
    ++calls_;
    return do_generate(request);
}

EmbeddingVector Embedder::embed(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("cannot embed empty text");
    ++calls_;
    EmbeddingVector v = do_embed(text);
    for (double x : v.values) {
        if (!std::isfinite(x)) throw RemoteError("embedding backend returned a non-finite value");
    }
    return v;
}

}  // namespace gentool::provider
