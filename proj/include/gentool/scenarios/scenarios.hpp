// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gentool/core/json.hpp"
#include "gentool/core/types.hpp"
#include "gentool/provider/provider.hpp"
#include "gentool/retrieval/retrieval.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gentool::scenarios {

inline constexpr double kDefaultSplitRatio = 0.67;

// Test-cluster roles. C2 feeds seen-query/unseen-tool, C3 feeds three buckets,
// C4 feeds seen-query/seen-tool.
enum class ClusterRole { c2, c3, c4 };

[[nodiscard]] std::string_view to_string(ClusterRole role);
[[nodiscard]] std::optional<ClusterRole> cluster_role_from_string(std::string_view text);

struct SplitPlan {
    std::set<std::string> train_cluster_ids;
    std::set<std::string> test_cluster_ids;
    std::uint64_t rng_seed = 0;
    double ratio = kDefaultSplitRatio;
    // Round-robin over the shuffled test clusters; empty when fewer than three
    // test clusters exist.
    std::map<std::string, ClusterRole> test_roles;

    friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

[[nodiscard]] core::Json to_json(const SplitPlan& plan);
[[nodiscard]] SplitPlan split_plan_from_json(const core::Json& j);

// round(ratio * n) clusters go to training, chosen by a seeded shuffle of the
// sorted ids. Throws SplitError for fewer than four clusters, a ratio outside
// (0, 1] or duplicate cluster ids.
[[nodiscard]] SplitPlan split_clusters(const std::vector<core::QueryToolCluster>& clusters,
                                       double ratio = kDefaultSplitRatio, std::uint64_t seed = 0);

// Ranking label:
//   no gold            -> [sentinel, others sorted]
//   gold only          -> [gold, sentinel, others sorted]
//   gold and weak      -> [gold, weak, sentinel, others sorted]
// Throws LabelError when the sentinel, gold or weak is missing from the
// toolset, or weak is given without gold.
[[nodiscard]] std::vector<std::string> rank_label_for(const std::vector<std::string>& toolset_names,
                                                      const std::optional<std::string>& gold,
                                                      const std::optional<std::string>& weak = std::nullopt);

struct ScenarioCorpus {
    std::vector<core::TrainingInstance> train;
    std::map<core::Scenario, std::vector<core::TrainingInstance>> test;
};

// Every distinct tool of the clusters (strong, weak and surplus weak), in
// cluster order. Throws IndexError when one name carries two different
// schemas.
[[nodiscard]] std::vector<core::ToolSpec> corpus_tools(const std::vector<core::QueryToolCluster>& clusters);

// Tools that must never appear in a training toolset: strong and weak tools
// of C2 clusters and strong tools of C3 clusters.
[[nodiscard]] std::set<std::string, std::less<>> unseen_tools(const std::vector<core::QueryToolCluster>& clusters,
                                                              const std::map<std::string, ClusterRole>& roles);

struct BuildOptions {
    int k = 5;
    std::uint64_t seed = 0;
    // Excluded from every training toolset (see unseen_tools).
    std::set<std::string, std::less<>> training_exclusions;
};

// Builds instances for clusters over a shared tool index. Toolsets for a
// cluster never contain its surplus weak tools nor the strong or weak tool
// of any other cluster sharing the instance query. Non-sentinel members are
// shuffled per instance (seeded by options.seed and the instance id) so the
// gold tool's listing position carries no signal; the sentinel stays last.
class ScenarioBuilder {
public:
    // `embedder` embeds queries for toolsets without a required tool; it must
    // outlive the builder.
    ScenarioBuilder(const std::vector<core::QueryToolCluster>& all_clusters, const retrieval::ToolIndex& index,
                    provider::Embedder& embedder, BuildOptions options);

    // (T^N, q, none), (T, q, t), (T^N, q', none), (T', q', t').
    [[nodiscard]] std::vector<core::TrainingInstance> build_zero_to_one(const core::QueryToolCluster& cluster);

    // (T', q, t') then (T+, q, t) with t' ranked second.
    [[nodiscard]] std::vector<core::TrainingInstance> build_weak_to_strong(const core::QueryToolCluster& cluster);

    // Test buckets plus the auxiliary training instances they rely on. Every
    // cluster needs a role; throws SplitError unless all three roles occur.
    [[nodiscard]] ScenarioCorpus compile_test_scenarios(const std::vector<core::QueryToolCluster>& test_clusters,
                                                        const std::map<std::string, ClusterRole>& roles);

private:
    enum class Split { train, test };

    core::TrainingInstance make(const core::QueryToolCluster& cluster, std::string_view tag, core::QueryRole query,
                                const std::vector<const core::ToolSpec*>& required,
                                const std::vector<const core::ToolSpec*>& excluded, core::PairType pair_type,
                                core::Scenario scenario, Split split);
    core::TrainingInstance scrubbed(const core::QueryToolCluster& cluster, std::string_view tag);
    std::set<std::string, std::less<>> base_exclusions(const core::QueryToolCluster& cluster,
                                                       const std::string& query, Split split) const;
    void shuffle_members(core::TrainingInstance& instance) const;

    const retrieval::ToolIndex& index_;
    provider::Embedder& embedder_;
    BuildOptions options_;
    std::map<std::string, std::set<std::string>> tools_by_query_;
};

// Full corpus: zero-to-one and weak-to-strong pairs for every training
// cluster, then the test buckets with their auxiliary training instances.
// Training instances are ordered by cluster id, then construction order.
[[nodiscard]] ScenarioCorpus compile_corpus(const std::vector<core::QueryToolCluster>& clusters,
                                            const SplitPlan& plan, const retrieval::ToolIndex& index,
                                            provider::Embedder& embedder, int k = 5);

// Corpus scan: structural invariants of every instance, bucket tags, and the
// seen/unseen properties of each test instance against the training set.
// Returns one message per violation.
[[nodiscard]] std::vector<std::string> soundness_violations(const ScenarioCorpus& corpus, int k = 5);

}  // namespace gentool::scenarios
