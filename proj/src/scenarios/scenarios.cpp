// SPDX-License-Identifier: Apache-2.0
#include "gentool/scenarios/scenarios.hpp"

#include "gentool/core/validate.hpp"
#include "gentool/error.hpp"
#include "gentool/provider/hashing_embedder.hpp"
#include "gentool/provider/mock_generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gentool::scenarios {

using core::Json;
using core::QueryRole;
using core::QueryToolCluster;
using core::Scenario;
using core::ToolSpec;
using core::TrainingInstance;

std::string_view to_string(ClusterRole role) {
    switch (role) {
        case ClusterRole::c2: return "C2";
        case ClusterRole::c3: return "C3";
        case ClusterRole::c4: return "C4";
    }
    return "C2";
}

std::optional<ClusterRole> cluster_role_from_string(std::string_view text) {
    if (text == "C2") return ClusterRole::c2;
    if (text == "C3") return ClusterRole::c3;
    if (text == "C4") return ClusterRole::c4;
    return std::nullopt;
}

namespace {

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[provider::draw(rng, i)]);
}

std::set<std::string> string_set(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw InputError(std::string("split plan needs a \"") + key + "\" list");
    std::set<std::string> out;
    for (const auto& item : j[key]) {
        if (!item.is_string()) throw InputError(std::string("split plan \"") + key + "\" holds a non-string");
        out.insert(item.get<std::string>());
    }
    return out;
}

}  // namespace

Json to_json(const SplitPlan& plan) {
    Json roles = Json::object();
    for (const auto& [id, role] : plan.test_roles) roles[id] = std::string(to_string(role));
    return Json{{"ratio", plan.ratio},
                {"rng_seed", plan.rng_seed},
                {"train_cluster_ids", plan.train_cluster_ids},
                {"test_cluster_ids", plan.test_cluster_ids},
                {"test_roles", roles}};
}

SplitPlan split_plan_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("split plan must be a JSON object");
    SplitPlan plan;
    if (!j.contains("ratio") || !j["ratio"].is_number()) throw InputError("split plan needs a numeric \"ratio\"");
    if (!j.contains("rng_seed") || !j["rng_seed"].is_number_unsigned()) {
        throw InputError("split plan needs a non-negative integer \"rng_seed\"");
    }
    plan.ratio = j["ratio"].get<double>();
    plan.rng_seed = j["rng_seed"].get<std::uint64_t>();
    plan.train_cluster_ids = string_set(j, "train_cluster_ids");
    plan.test_cluster_ids = string_set(j, "test_cluster_ids");
    if (j.contains("test_roles")) {
        if (!j["test_roles"].is_object()) throw InputError("\"test_roles\" must be an object");
        for (const auto& [id, value] : j["test_roles"].items()) {
            const auto role = value.is_string() ? cluster_role_from_string(value.get<std::string>()) : std::nullopt;
            if (!role) throw InputError("unknown role for cluster " + id);
            plan.test_roles[id] = *role;
        }
    }
    return plan;
}

SplitPlan split_clusters(const std::vector<QueryToolCluster>& clusters, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw SplitError("split ratio must lie in (0, 1]");
    if (clusters.size() < 4) {
        throw SplitError("need at least 4 clusters to split, got " + std::to_string(clusters.size()));
    }
    std::vector<std::string> ids;
    for (const auto& c : clusters) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw SplitError("duplicate cluster ids");

    seeded_shuffle(ids, seed);
    const auto train_count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ids.size())));

    SplitPlan plan;
    plan.rng_seed = seed;
    plan.ratio = ratio;
    plan.train_cluster_ids.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_count));
    plan.test_cluster_ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(train_count), ids.end());

    if (plan.test_cluster_ids.size() >= 3) {
        std::vector<std::string> test(plan.test_cluster_ids.begin(), plan.test_cluster_ids.end());
        seeded_shuffle(test, seed ^ 0x5bd1e995u);
        constexpr ClusterRole kOrder[] = {ClusterRole::c2, ClusterRole::c3, ClusterRole::c4};
        for (std::size_t i = 0; i < test.size(); ++i) plan.test_roles[test[i]] = kOrder[i % 3];
    }
    return plan;
}

std::vector<std::string> rank_label_for(const std::vector<std::string>& toolset_names,
                                        const std::optional<std::string>& gold,
                                        const std::optional<std::string>& weak) {
    const std::set<std::string> names(toolset_names.begin(), toolset_names.end());
    if (names.size() != toolset_names.size()) throw LabelError("toolset has duplicate names");
    const std::string sentinel(core::kSentinelName);
    if (names.count(sentinel) == 0) throw LabelError("toolset lacks " + sentinel);

    std::optional<std::string> useful_gold = gold;
    if (useful_gold && *useful_gold == sentinel) useful_gold.reset();
    if (weak && !useful_gold) throw LabelError("a weak tool needs a gold tool");
    if (useful_gold && names.count(*useful_gold) == 0) throw LabelError("gold tool " + *useful_gold + " not in toolset");
    if (weak && (names.count(*weak) == 0 || *weak == sentinel)) throw LabelError("weak tool " + *weak + " not in toolset");
    if (weak && *weak == *useful_gold) throw LabelError("weak and gold tool coincide");

    std::vector<std::string> label;
    if (useful_gold) label.push_back(*useful_gold);
    if (weak) label.push_back(*weak);
    label.push_back(sentinel);
    for (const auto& name : names) {
        if (std::find(label.begin(), label.end(), name) == label.end()) label.push_back(name);
    }
    return label;
}

std::vector<ToolSpec> corpus_tools(const std::vector<QueryToolCluster>& clusters) {
    std::vector<ToolSpec> tools;
    std::map<std::string, std::size_t> position;
    auto add = [&](const ToolSpec& tool) {
        const auto [it, inserted] = position.emplace(tool.name, tools.size());
        if (inserted) {
            tools.push_back(tool);
        } else if (!(tools[it->second] == tool)) {
            throw IndexError("tool name " + tool.name + " is used for two different schemas");
        }
    };
    for (const auto& c : clusters) {
        add(c.strong_tool);
        add(c.weak_tool);
        for (const auto& extra : c.extra_weak_tools) add(extra);
    }
    return tools;
}

std::set<std::string, std::less<>> unseen_tools(const std::vector<QueryToolCluster>& clusters,
                                                const std::map<std::string, ClusterRole>& roles) {
    std::set<std::string, std::less<>> out;
    for (const auto& c : clusters) {
        const auto it = roles.find(c.id);
        if (it == roles.end()) continue;
        if (it->second == ClusterRole::c2) {
            out.insert(c.strong_tool.name);
            out.insert(c.weak_tool.name);
        } else if (it->second == ClusterRole::c3) {
            out.insert(c.strong_tool.name);
        }
    }
    return out;
}

ScenarioBuilder::ScenarioBuilder(const std::vector<QueryToolCluster>& all_clusters,
                                 const retrieval::ToolIndex& index, provider::Embedder& embedder,
                                 BuildOptions options)
    : index_(index), embedder_(embedder), options_(std::move(options)) {
    if (options_.k < 2) throw std::invalid_argument("k must be at least 2 to hold a strong and a weak tool");
    for (const auto& c : all_clusters) {
        for (const std::string* q : {&c.strong_query, &c.weak_query}) {
            tools_by_query_[*q].insert(c.strong_tool.name);
            tools_by_query_[*q].insert(c.weak_tool.name);
        }
    }
}

std::set<std::string, std::less<>> ScenarioBuilder::base_exclusions(const QueryToolCluster& cluster,
                                                                    const std::string& query, Split split) const {
    std::set<std::string, std::less<>> excluded;
    for (const auto& extra : cluster.extra_weak_tools) excluded.insert(extra.name);
    if (const auto it = tools_by_query_.find(query); it != tools_by_query_.end()) {
        excluded.insert(it->second.begin(), it->second.end());
    }
    if (split == Split::train) excluded.insert(options_.training_exclusions.begin(), options_.training_exclusions.end());
    return excluded;
}

void ScenarioBuilder::shuffle_members(TrainingInstance& instance) const {
    if (instance.toolset.size() < 2) return;
    const std::string material = std::to_string(options_.seed) + '\x1f' + instance.id;
    std::mt19937_64 rng(provider::fnv1a64(material));
    auto& tools = instance.toolset;
    // The sentinel is always the final member and stays there.
    for (std::size_t i = tools.size() - 1; i > 1; --i) std::swap(tools[i - 1], tools[provider::draw(rng, i)]);
}

TrainingInstance ScenarioBuilder::make(const QueryToolCluster& cluster, std::string_view tag, QueryRole query,
                                       const std::vector<const ToolSpec*>& required,
                                       const std::vector<const ToolSpec*>& excluded, core::PairType pair_type,
                                       Scenario scenario, Split split) {
    TrainingInstance inst;
    inst.id = cluster.id + "/" + std::string(tag);
    inst.query = cluster.query(query);
    inst.cluster_id = cluster.id;
    inst.pair_type = pair_type;
    inst.scenario = scenario;

    auto exclusions = base_exclusions(cluster, inst.query, split);
    for (const auto* tool : excluded) exclusions.insert(tool->name);
    std::vector<ToolSpec> required_tools;
    for (const auto* tool : required) {
        if (split == Split::train && options_.training_exclusions.count(tool->name) != 0) {
            throw SplitError("tool " + tool->name + " of training instance " + inst.id +
                             " is reserved as an unseen test tool");
        }
        required_tools.push_back(*tool);
    }
    inst.toolset = retrieval::build_toolset(inst.query, required_tools, exclusions, index_, options_.k, &embedder_);

    std::optional<std::string> weak;
    if (!required.empty()) {
        inst.gold_tool = required.front()->name;
        const core::ToolCall* call = cluster.call_for(query, *inst.gold_tool);
        if (call == nullptr) {
            throw InputError("cluster " + cluster.id + " has no call for " + std::string(core::to_string(query)) +
                             " on " + *inst.gold_tool);
        }
        inst.gold_call = *call;
        if (required.size() > 1) weak = required[1]->name;
    } else {
        inst.gold_call = core::ToolCall::generate_response();
    }
    shuffle_members(inst);
    inst.rank_label = rank_label_for(inst.toolset_names(), inst.gold_tool, weak);
    return inst;
}

TrainingInstance ScenarioBuilder::scrubbed(const QueryToolCluster& cluster, std::string_view tag) {
    TrainingInstance inst;
    inst.id = cluster.id + "/" + std::string(tag);
    inst.query = cluster.weak_query;
    inst.cluster_id = cluster.id;
    inst.pair_type = core::PairType::test_only;
    inst.scenario = Scenario::unseen_q_seen_t;
    inst.gold_call = core::ToolCall::generate_response();

    // Same anchor and exclusions as the weak-tool toolset for q', with the
    // weak tool's slot handed to the next-ranked distractor.
    auto exclusions = base_exclusions(cluster, inst.query, Split::test);
    exclusions.insert(cluster.strong_tool.name);
    exclusions.insert(cluster.weak_tool.name);
    const auto& anchor = index_.at(cluster.weak_tool.name).vector;
    for (const auto& name :
         retrieval::rank_distractors(anchor, exclusions, index_, static_cast<std::size_t>(options_.k))) {
        inst.toolset.push_back(index_.at(name).tool);
    }
    inst.toolset.push_back(core::sentinel_tool());
    shuffle_members(inst);
    inst.rank_label = rank_label_for(inst.toolset_names(), std::nullopt);
    return inst;
}

std::vector<TrainingInstance> ScenarioBuilder::build_zero_to_one(const QueryToolCluster& c) {
    using core::PairType;
    const auto* t = &c.strong_tool;
    const auto* tw = &c.weak_tool;
    return {
        make(c, "z2o-none-q", QueryRole::strong, {}, {t, tw}, PairType::zero_to_one, Scenario::pure_train, Split::train),
        make(c, "z2o-tool-q", QueryRole::strong, {t}, {tw}, PairType::zero_to_one, Scenario::pure_train, Split::train),
        make(c, "z2o-none-qw", QueryRole::weak, {}, {t, tw}, PairType::zero_to_one, Scenario::pure_train, Split::train),
        make(c, "z2o-tool-qw", QueryRole::weak, {tw}, {t}, PairType::zero_to_one, Scenario::pure_train, Split::train),
    };
}

std::vector<TrainingInstance> ScenarioBuilder::build_weak_to_strong(const QueryToolCluster& c) {
    using core::PairType;
    const auto* t = &c.strong_tool;
    const auto* tw = &c.weak_tool;
    return {
        make(c, "w2s-weak", QueryRole::strong, {tw}, {t}, PairType::weak_to_strong, Scenario::pure_train,
             Split::train),
        make(c, "w2s-plus", QueryRole::strong, {t, tw}, {}, PairType::weak_to_strong, Scenario::pure_train,
             Split::train),
    };
}

ScenarioCorpus ScenarioBuilder::compile_test_scenarios(const std::vector<QueryToolCluster>& test_clusters,
                                                       const std::map<std::string, ClusterRole>& roles) {
    using core::PairType;
    std::set<ClusterRole> present;
    for (const auto& c : test_clusters) {
        const auto it = roles.find(c.id);
        if (it == roles.end()) throw SplitError("test cluster " + c.id + " has no role");
        present.insert(it->second);
    }
    if (present.size() < 3) throw SplitError("test clusters must cover roles C2, C3 and C4 (need at least 3)");

    ScenarioCorpus out;
    for (Scenario s : core::kTestScenarios) out.test[s];
    for (const auto& c : test_clusters) {
        const auto* t = &c.strong_tool;
        const auto* tw = &c.weak_tool;
        auto& seen_q_unseen_t = out.test[Scenario::seen_q_unseen_t];
        switch (roles.at(c.id)) {
            case ClusterRole::c2:
                out.train.push_back(make(c, "aux-none-q", QueryRole::strong, {}, {t, tw}, PairType::zero_to_one,
                                         Scenario::pure_train, Split::train));
                seen_q_unseen_t.push_back(make(c, "test-strong", QueryRole::strong, {t}, {tw}, PairType::test_only,
                                               Scenario::seen_q_unseen_t, Split::test));
                seen_q_unseen_t.push_back(make(c, "test-weak", QueryRole::strong, {tw}, {t}, PairType::test_only,
                                               Scenario::seen_q_unseen_t, Split::test));
                break;
            case ClusterRole::c3:
                out.train.push_back(make(c, "aux-weak-q", QueryRole::strong, {tw}, {t}, PairType::weak_to_strong,
                                         Scenario::pure_train, Split::train));
                seen_q_unseen_t.push_back(make(c, "test-plus", QueryRole::strong, {t, tw}, {}, PairType::test_only,
                                               Scenario::seen_q_unseen_t, Split::test));
                out.test[Scenario::unseen_q_unseen_t].push_back(make(c, "test-strong-qw", QueryRole::weak, {t}, {tw},
                                                                     PairType::test_only,
                                                                     Scenario::unseen_q_unseen_t, Split::test));
                out.test[Scenario::unseen_q_seen_t].push_back(make(c, "test-weak-qw", QueryRole::weak, {tw}, {t},
                                                                   PairType::test_only, Scenario::unseen_q_seen_t,
                                                                   Split::test));
                out.test[Scenario::unseen_q_seen_t].push_back(scrubbed(c, "test-none-qw"));
                break;
            case ClusterRole::c4:
                out.train.push_back(make(c, "aux-weak-q", QueryRole::strong, {tw}, {t}, PairType::weak_to_strong,
                                         Scenario::pure_train, Split::train));
                out.train.push_back(make(c, "aux-strong-qw", QueryRole::weak, {t}, {tw}, PairType::zero_to_one,
                                         Scenario::pure_train, Split::train));
                out.test[Scenario::seen_q_seen_t].push_back(make(c, "test-plus", QueryRole::strong, {t, tw}, {},
                                                                 PairType::test_only, Scenario::seen_q_seen_t,
                                                                 Split::test));
                break;
        }
    }
    return out;
}

namespace {

void sort_by_cluster(std::vector<TrainingInstance>& instances) {
    std::stable_sort(instances.begin(), instances.end(),
                     [](const TrainingInstance& a, const TrainingInstance& b) { return a.cluster_id < b.cluster_id; });
}

}  // namespace

ScenarioCorpus compile_corpus(const std::vector<QueryToolCluster>& clusters, const SplitPlan& plan,
                              const retrieval::ToolIndex& index, provider::Embedder& embedder, int k) {
    std::vector<QueryToolCluster> train;
    std::vector<QueryToolCluster> test;
    for (const auto& c : clusters) {
        if (plan.train_cluster_ids.count(c.id) != 0) {
            train.push_back(c);
        } else if (plan.test_cluster_ids.count(c.id) != 0) {
            test.push_back(c);
        } else {
            throw SplitError("cluster " + c.id + " is not in the split plan");
        }
    }
    if (test.size() < 3) {
        throw SplitError("need at least 3 test clusters to compile the test scenarios, got " +
                         std::to_string(test.size()));
    }
    auto by_id = [](const QueryToolCluster& a, const QueryToolCluster& b) { return a.id < b.id; };
    std::sort(train.begin(), train.end(), by_id);
    std::sort(test.begin(), test.end(), by_id);

    BuildOptions options;
    options.k = k;
    options.seed = plan.rng_seed;
    options.training_exclusions = unseen_tools(test, plan.test_roles);
    ScenarioBuilder builder(clusters, index, embedder, std::move(options));

    ScenarioCorpus corpus = builder.compile_test_scenarios(test, plan.test_roles);
    for (const auto& c : train) {
        for (auto& inst : builder.build_zero_to_one(c)) corpus.train.push_back(std::move(inst));
        for (auto& inst : builder.build_weak_to_strong(c)) corpus.train.push_back(std::move(inst));
    }
    sort_by_cluster(corpus.train);
    for (auto& [scenario, bucket] : corpus.test) sort_by_cluster(bucket);
    return corpus;
}

std::vector<std::string> soundness_violations(const ScenarioCorpus& corpus, int k) {
    std::vector<std::string> out;
    std::set<std::string> training_tools;
    std::set<std::string> training_queries;
    for (const auto& inst : corpus.train) {
        for (const auto& v : core::validate_instance(inst, k)) out.push_back(inst.id + ": " + v);
        if (inst.scenario != Scenario::pure_train) out.push_back(inst.id + ": training instance with a test tag");
        for (const auto& tool : inst.toolset) training_tools.insert(tool.name);
        training_queries.insert(inst.query);
    }
    for (const auto& [scenario, bucket] : corpus.test) {
        for (const auto& inst : bucket) {
            for (const auto& v : core::validate_instance(inst, k)) out.push_back(inst.id + ": " + v);
            if (inst.scenario != scenario) out.push_back(inst.id + ": scenario tag differs from its bucket");
            const bool query_seen = training_queries.count(inst.query) != 0;
            if (core::is_unseen_query(scenario) == query_seen) {
                out.push_back(inst.id + ": query is " + (query_seen ? "seen" : "unseen") + " in training but the " +
                              "instance is tagged " + std::string(core::to_string(scenario)));
            }
            if (!inst.gold_tool) continue;
            const bool tool_seen = training_tools.count(*inst.gold_tool) != 0;
            if (core::is_unseen_tool(scenario) == tool_seen) {
                out.push_back(inst.id + ": gold tool " + *inst.gold_tool + " is " + (tool_seen ? "seen" : "unseen") +
                              " in training but the instance is tagged " + std::string(core::to_string(scenario)));
            }
        }
    }
    return out;
}

}  // namespace gentool::scenarios
