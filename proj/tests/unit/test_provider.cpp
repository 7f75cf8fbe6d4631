// SPDX-License-Identifier: Apache-2.0
#include "gentool/error.hpp"
#include "gentool/provider/cache.hpp"
#include "gentool/provider/digest.hpp"
#include "gentool/provider/hashing_embedder.hpp"
#include "gentool/provider/mock_generator.hpp"
#include "gentool/provider/parallel.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

using namespace gentool;
using namespace gentool::provider;

TEST(Digest, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fnv, KnownVectors) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Cosine, MatchesOracle) {
    const EmbeddingVector a{{1, 2, 3}};
    const EmbeddingVector b{{-1, 0.5, 2}};
    EXPECT_NEAR(cosine(a, b), oracle::cosine(a.values, b.values), 1e-12);
    EXPECT_THROW((void)cosine(a, EmbeddingVector{{1, 2}}), std::invalid_argument);
    EXPECT_THROW((void)cosine(a, EmbeddingVector{{0, 0, 0}}), DegenerateVectorError);
}

TEST(HashingEmbedder, UnitNormDeterministicCaseInsensitive) {
    HashingEmbedder e(64);
    const auto v = e.embed("Book a flight to Paris");
    EXPECT_EQ(v.dimension(), 64u);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_EQ(v, e.embed("Book a flight to Paris"));
    EXPECT_EQ(v, e.embed("BOOK A FLIGHT TO PARIS"));
    EXPECT_GT(cosine(v, e.embed("Book a flight to Rome")), cosine(v, e.embed("Weather in July")));
    EXPECT_EQ(e.model_id(), "char3-fnv1a-64");
    EXPECT_THROW(HashingEmbedder(0), std::invalid_argument);
}

TEST(Requests, Checked) {
    GenerationRequest r;
    r.prompt = "x";
    EXPECT_NO_THROW(check_request(r));
    r.temperature = -1;
    EXPECT_THROW(check_request(r), std::invalid_argument);
    r.temperature = 0;
    r.max_tokens = 0;
    EXPECT_THROW(check_request(r), std::invalid_argument);
}

TEST(MockGenerator, DeterministicPerSeedAndPrompt) {
    MockGenerator a(1);
    MockGenerator b(1);
    MockGenerator c(2);
    GenerationRequest r;
    r.prompt = "Hello there";
    EXPECT_EQ(a.generate(r), b.generate(r));
    EXPECT_EQ(a.generate(r), "I can help with that request.");
    EXPECT_EQ(a.call_count(), 2u);
    (void)c;
}

TEST(MockGenerator, WeakenedToolIsProperSubset) {
    std::mt19937_64 rng(5);
    const auto t = support::tool("track_order", {"order_id", "email", "date"}, {"status", "eta"});
    for (int i = 0; i < 20; ++i) {
        const auto w = mock::weaken(t, {t.name}, rng);
        EXPECT_NE(w.name, t.name);
        EXPECT_LT(w.parameters.size(), t.parameters.size());
        EXPECT_LT(w.returns.size(), t.returns.size());
        for (const auto& p : w.parameters) EXPECT_NE(t.find_parameter(p.name), nullptr);
    }
}

TEST(Cache, HitsAvoidBackendAndPersist) {
    const auto dir = support::fresh_dir("provider_cache");
    const auto file = dir / "responses.jsonl";
    GenerationRequest r;
    r.prompt = "Hello there";
    {
        auto inner = std::make_shared<MockGenerator>(1);
        CachingGenerator g(inner, std::make_shared<ResponseCache>(file));
        const auto first = g.generate(r);
        EXPECT_EQ(g.generate(r), first);
        EXPECT_EQ(inner->call_count(), 1u);
        EXPECT_EQ(g.hits(), 1u);
        r.temperature = 0.0;
        (void)g.generate(r);
        EXPECT_EQ(inner->call_count(), 2u);
    }
    auto inner = std::make_shared<MockGenerator>(1);
    auto cache = std::make_shared<ResponseCache>(file);
    EXPECT_EQ(cache->size(), 2u);
    CachingGenerator g(inner, cache);
    (void)g.generate(r);
    EXPECT_EQ(inner->call_count(), 0u);

    auto embed_inner = std::make_shared<HashingEmbedder>(32);
    CachingEmbedder e(embed_inner, cache);
    const auto v = e.embed("abc");
    EXPECT_EQ(e.embed("abc"), v);
    EXPECT_EQ(embed_inner->call_count(), 1u);
    ResponseCache reloaded(file);
    EXPECT_EQ(std::get<EmbeddingVector>(*reloaded.lookup(embedding_cache_key("offline-hash", embed_inner->model_id(), "abc"))), v);
}

TEST(Cache, KeysSeparateBackendsAndParameters) {
    GenerationRequest r;
    r.prompt = "p";
    const auto k = generation_cache_key("mock", r);
    EXPECT_NE(k, generation_cache_key("remote-chat", r));
    r.model_id = "other";
    EXPECT_NE(k, generation_cache_key("mock", r));
    EXPECT_NE(embedding_cache_key("a", "m", "t"), embedding_cache_key("a", "m", "u"));
}

TEST(Parallel, RunsAllAndRethrowsLowestIndex) {
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] = 1; });
    EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 100);

    std::atomic<int> ran{0};
    try {
        parallel_for(50, 4, [&](std::size_t i) {
            ++ran;
            if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
        });
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "fail 7");
    }
    EXPECT_EQ(ran.load(), 50);
}
