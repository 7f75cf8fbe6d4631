// SPDX-License-Identifier: Apache-2.0
#include "gentool/cli/cli.hpp"

#include "gentool/core/json.hpp"
#include "gentool/core/stats.hpp"
#include "gentool/error.hpp"
#include "gentool/metrics/metrics.hpp"
#include "gentool/provider/cache.hpp"
#include "gentool/provider/hashing_embedder.hpp"
#include "gentool/provider/mock_generator.hpp"
#include "gentool/provider/parallel.hpp"
#include "gentool/provider/remote.hpp"
#include "gentool/retrieval/retrieval.hpp"
#include "gentool/scenarios/scenarios.hpp"
#include "gentool/synthesis/synthesis.hpp"
#include "gentool/textio/textio.hpp"

#include <CLI11.hpp>

#include <map>
#include <ostream>
#include <set>

namespace gentool::cli {

namespace fs = std::filesystem;
using core::Json;

void prepare(const RunConfig& config) {
    if (config.k < 1) throw InputError("k must be at least 1");
    if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) throw InputError("split ratio must lie in (0, 1)");
    if (config.jobs == 0) throw InputError("jobs must be at least 1");
    if (config.backend != "mock" && config.backend != "remote") {
        throw InputError("unknown backend '" + config.backend + "' (expected mock or remote)");
    }
    if (config.backend == "remote" && (config.chat_url.empty() || config.embeddings_url.empty())) {
        throw InputError("the remote backend needs chat-url and embeddings-url");
    }
    if (config.embedding_dimension == 0) throw InputError("embedding dimension must be positive");
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir)) {
        throw InputError("cannot create output directory " + config.out_dir.string());
    }
}

namespace {

std::shared_ptr<provider::ResponseCache> open_cache(const RunConfig& config) {
    if (config.cache_dir.empty()) return nullptr;
    // One cache per process: generator and embedder keys never collide.
    static std::map<fs::path, std::weak_ptr<provider::ResponseCache>> open;
    const fs::path file = config.cache_dir / "responses.jsonl";
    if (auto existing = open[file].lock()) return existing;
    auto cache = std::make_shared<provider::ResponseCache>(file);
    open[file] = cache;
    return cache;
}

provider::RemoteConfig remote_config(const std::string& url, const std::string& model) {
    provider::RemoteConfig rc;
    rc.url = url;
    rc.model_id = model;
    rc.api_key = provider::api_key_from_environment();
    return rc;
}

void write_lines(const fs::path& path, const std::vector<core::TrainingInstance>& instances) {
    std::vector<Json> lines;
    lines.reserve(instances.size());
    for (const auto& inst : instances) lines.push_back(core::to_json(inst));
    core::write_jsonl(path, lines);
}

std::vector<core::TrainingInstance> read_all(const std::vector<fs::path>& corpora) {
    std::vector<core::TrainingInstance> all;
    for (const auto& path : corpora) {
        auto part = core::read_instances(path);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
}

std::string format_percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

}  // namespace

std::shared_ptr<provider::TextGenerator> make_generator(const RunConfig& config) {
    std::shared_ptr<provider::TextGenerator> inner;
    if (config.backend == "remote") {
        inner = std::make_shared<provider::RemoteGenerator>(remote_config(config.chat_url, config.model_id));
    } else {
        inner = std::make_shared<provider::MockGenerator>(config.seed);
    }
    if (auto cache = open_cache(config)) return std::make_shared<provider::CachingGenerator>(inner, cache);
    return inner;
}

std::shared_ptr<provider::Embedder> make_embedder(const RunConfig& config) {
    std::shared_ptr<provider::Embedder> inner;
    if (config.backend == "remote") {
        inner = std::make_shared<provider::RemoteEmbedder>(remote_config(config.embeddings_url, config.embedding_model));
    } else {
        inner = std::make_shared<provider::HashingEmbedder>(config.embedding_dimension);
    }
    if (auto cache = open_cache(config)) return std::make_shared<provider::CachingEmbedder>(inner, cache);
    return inner;
}

int cmd_make_seeds(std::size_t count, const RunConfig& config, std::ostream& out) {
    prepare(config);
    std::vector<Json> lines;
    for (const auto& seed : synthesis::mock_seed_corpus(count, config.seed)) lines.push_back(synthesis::to_json(seed));
    const fs::path path = config.out_dir / "seeds.jsonl";
    core::write_jsonl(path, lines);
    out << "wrote " << lines.size() << " seeds to " << path.string() << "\n";
    return kExitOk;
}

int cmd_synthesize(const fs::path& seeds_path, const RunConfig& config, std::ostream& out) {
    prepare(config);
    const auto seeds = synthesis::read_seeds(seeds_path);
    auto generator = make_generator(config);
    synthesis::SynthesisOptions options;
    options.model_id = config.model_id;
    synthesis::Synthesizer synthesizer(*generator, options);

    std::vector<core::QueryToolCluster> clusters(seeds.size());
    provider::parallel_for(seeds.size(), config.jobs,
                           [&](std::size_t i) { clusters[i] = synthesizer.build_cluster(seeds[i]); });

    std::vector<Json> cluster_lines;
    std::vector<Json> quality_lines;
    for (const auto& cluster : clusters) {
        const auto report = synthesis::validate_cluster(cluster);
        quality_lines.push_back(synthesis::to_json(report));
        if (report.all_valid) cluster_lines.push_back(core::to_json(cluster));
    }
    core::write_jsonl(config.out_dir / "clusters.jsonl", cluster_lines);
    core::write_jsonl(config.out_dir / "quality.jsonl", quality_lines);
    out << "synthesized " << clusters.size() << " clusters, " << cluster_lines.size() << " passed quality checks\n";
    return kExitOk;
}

int cmd_split(const fs::path& clusters_path, const RunConfig& config, std::ostream& out) {
    prepare(config);
    const auto clusters = core::read_clusters(clusters_path);
    const auto plan = scenarios::split_clusters(clusters, config.split_ratio, config.seed);
    const fs::path path = config.out_dir / "split_plan.json";
    core::write_text(path, core::dump_pretty(scenarios::to_json(plan)));
    out << "train " << plan.train_cluster_ids.size() << " / test " << plan.test_cluster_ids.size() << " clusters\n";
    return kExitOk;
}

int cmd_compile(const fs::path& clusters_path, const fs::path& plan_path, const RunConfig& config,
                std::ostream& out) {
    prepare(config);
    const auto clusters = core::read_clusters(clusters_path);
    Json plan_json = Json::parse(core::read_text(plan_path), nullptr, false);
    if (plan_json.is_discarded()) throw InputError(plan_path.string() + ": invalid JSON");
    const auto plan = scenarios::split_plan_from_json(plan_json);

    auto embedder = make_embedder(config);
    const auto index = retrieval::index_tools(scenarios::corpus_tools(clusters), *embedder, config.jobs);
    const auto corpus = scenarios::compile_corpus(clusters, plan, index, *embedder, config.k);

    write_lines(config.out_dir / "train.jsonl", corpus.train);
    out << "train: " << corpus.train.size() << " instances\n";
    for (const auto scenario : core::kTestScenarios) {
        const auto it = corpus.test.find(scenario);
        const auto& instances = it == corpus.test.end() ? std::vector<core::TrainingInstance>{} : it->second;
        const std::string name = "test_" + std::string(core::to_string(scenario)) + ".jsonl";
        write_lines(config.out_dir / name, instances);
        out << core::to_string(scenario) << ": " << instances.size() << " instances\n";
    }
    core::write_text(config.out_dir / "tool_index.json", core::dump_line(retrieval::to_json(index)) + "\n");
    return kExitOk;
}

int cmd_render(const std::vector<fs::path>& corpora, const RunConfig& config, std::ostream& out) {
    prepare(config);
    for (const auto& path : corpora) {
        std::vector<Json> rows;
        for (const auto& inst : core::read_instances(path)) rows.push_back(textio::render_row(inst));
        const fs::path target = config.out_dir / ("render_" + path.stem().string() + ".jsonl");
        core::write_jsonl(target, rows);
        out << "wrote " << rows.size() << " rows to " << target.string() << "\n";
    }
    return kExitOk;
}

int cmd_evaluate(const std::vector<fs::path>& corpora, const fs::path& predictions_path, const RunConfig& config,
                 std::ostream& out) {
    prepare(config);
    const auto instances = read_all(corpora);
    const auto predictions = metrics::read_predictions(predictions_path);
    const auto report = metrics::evaluate(instances, predictions);
    const std::string table = metrics::render_table(report);
    core::write_text(config.out_dir / "report.json", core::dump_pretty(core::to_json(report)));
    core::write_text(config.out_dir / "report.txt", table);
    out << table;
    const bool any_parsed = std::any_of(report.records.begin(), report.records.end(),
                                        [](const auto& r) { return r.format_ok > 0.0; });
    return any_parsed ? kExitOk : kExitNoParseablePredictions;
}

int cmd_analyze(const std::vector<fs::path>& corpora, const fs::path& predictions_path,
                const std::optional<fs::path>& train_path, const std::optional<fs::path>& index_path,
                const RunConfig& config, std::ostream& out) {
    prepare(config);
    if (train_path.has_value() != index_path.has_value()) {
        throw InputError("relatedness analysis needs both a training corpus and a tool index");
    }
    const auto instances = read_all(corpora);
    const auto predictions = metrics::read_predictions(predictions_path);
    std::set<std::string> ids;
    for (const auto& inst : instances) {
        if (!ids.insert(inst.id).second) throw InputError("duplicate instance id " + inst.id);
    }
    for (const auto& [id, text] : predictions) {
        if (ids.count(id) == 0) throw InputError("prediction for unknown instance " + id);
    }

    std::vector<core::RankedOutput> outputs;
    outputs.reserve(instances.size());
    for (const auto& inst : instances) {
        const auto it = predictions.find(inst.id);
        outputs.push_back(textio::parse_model_output(it == predictions.end() ? std::string_view() : it->second));
    }
    const auto rank = metrics::rank_analysis(outputs, instances);
    Json result{{"rank", metrics::to_json(rank)}};
    out << "consistency " << format_percent(rank.consistency) << "  ordering accuracy "
        << format_percent(rank.ordering_accuracy) << "\n";

    if (train_path) {
        Json index_json = Json::parse(core::read_text(*index_path), nullptr, false);
        if (index_json.is_discarded()) throw InputError(index_path->string() + ": invalid JSON");
        const auto index = retrieval::index_from_json(index_json);
        std::vector<core::ToolSpec> train_gold;
        std::set<std::string> seen;
        for (const auto& inst : core::read_instances(*train_path)) {
            if (inst.gold_call.is_sentinel()) continue;
            if (!seen.insert(inst.gold_call.tool_name).second) continue;
            const auto* entry = index.find(inst.gold_call.tool_name);
            if (entry == nullptr) throw InputError("training gold tool " + inst.gold_call.tool_name + " is not indexed");
            train_gold.push_back(entry->tool);
        }
        struct Bucket {
            std::size_t instances = 0;
            double tool_selection = 0.0;
        };
        std::map<std::size_t, Bucket> buckets;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const auto& inst = instances[i];
            if (inst.gold_call.is_sentinel()) continue;
            const auto* gold = index.find(inst.gold_call.tool_name);
            if (gold == nullptr) throw InputError("gold tool " + inst.gold_call.tool_name + " is not indexed");
            const auto related =
                retrieval::related_example_count(train_gold, gold->tool, index, config.relatedness_threshold);
            auto& bucket = buckets[related];
            ++bucket.instances;
            bucket.tool_selection += metrics::score_tool_selection(outputs[i], inst.gold_call);
        }
        Json rows = Json::array();
        for (const auto& [related, bucket] : buckets) {
            const double accuracy = bucket.tool_selection / static_cast<double>(bucket.instances) * 100.0;
            rows.push_back(Json{{"related_examples", related},
                                {"instances", bucket.instances},
                                {"tool_selection", accuracy}});
            out << "related " << related << ": " << bucket.instances << " instances, tool selection "
                << format_percent(accuracy) << "\n";
        }
        result["relatedness"] = Json{{"threshold", config.relatedness_threshold}, {"buckets", rows}};
    }
    core::write_text(config.out_dir / "analysis.json", core::dump_pretty(result));
    return kExitOk;
}

int cmd_stats(const std::vector<fs::path>& corpora, const RunConfig& config, std::ostream& out) {
    prepare(config);
    Json result = Json::object();
    const auto renderer = textio::text_renderer();
    for (const auto& path : corpora) {
        const auto instances = core::read_instances(path);
        const auto stats = core::corpus_stats(instances, renderer);
        result[path.filename().string()] = Json{{"tools", stats.tool_count},
                                                {"instances", stats.instance_count},
                                                {"mean_input_words", stats.mean_input_words},
                                                {"mean_output_words", stats.mean_output_words}};
        out << path.filename().string() << ": " << stats.tool_count << " tools, " << stats.instance_count
            << " instances, input " << format_percent(stats.mean_input_words) << " words, output "
            << format_percent(stats.mean_output_words) << " words\n";
    }
    core::write_text(config.out_dir / "stats.json", core::dump_pretty(result));
    return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tool-use corpus builder and evaluator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value config file; flags override it");

    RunConfig config;
    app.add_option("--backend", config.backend, "mock or remote")->capture_default_str();
    app.add_option("--chat-url", config.chat_url, "chat completion endpoint (remote backend)");
    app.add_option("--embeddings-url", config.embeddings_url, "embeddings endpoint (remote backend)");
    app.add_option("--model", config.model_id, "generation model id")->capture_default_str();
    app.add_option("--embedding-model", config.embedding_model, "embedding model id")->capture_default_str();
    app.add_option("--embedding-dim", config.embedding_dimension, "offline embedding dimension")
        ->capture_default_str();
    app.add_option("--cache-dir", config.cache_dir, "response cache directory");
    app.add_option("--k", config.k, "toolset size before the sentinel")->capture_default_str();
    app.add_option("--split-ratio", config.split_ratio, "share of clusters used for training")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "rng seed")->capture_default_str();
    app.add_option("--jobs", config.jobs, "parallelism bound")->capture_default_str();
    app.add_option("--out-dir", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--relatedness-threshold", config.relatedness_threshold, "cosine threshold")
        ->capture_default_str();

    std::size_t seed_count = 40;
    auto* make_seeds = app.add_subcommand("make-seeds", "write a mock seed corpus");
    make_seeds->add_option("--count", seed_count, "number of seeds")->capture_default_str();

    fs::path seeds_path;
    auto* synthesize = app.add_subcommand("synthesize", "seeds -> clusters.jsonl + quality.jsonl");
    synthesize->add_option("seeds", seeds_path, "seed JSONL")->required();

    fs::path clusters_path;
    auto* split = app.add_subcommand("split", "clusters -> split_plan.json");
    split->add_option("clusters", clusters_path, "cluster JSONL")->required();

    fs::path plan_path;
    auto* compile = app.add_subcommand("compile", "clusters + plan -> train/test corpora");
    compile->add_option("clusters", clusters_path, "cluster JSONL")->required();
    compile->add_option("plan", plan_path, "split_plan.json")->required();

    std::vector<fs::path> corpora;
    auto* render = app.add_subcommand("render", "corpus -> prompt/gold JSONL");
    render->add_option("corpora", corpora, "instance JSONL files")->required();

    fs::path predictions_path;
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against corpora");
    evaluate->add_option("--predictions", predictions_path, "prediction JSONL")->required();
    evaluate->add_option("corpora", corpora, "instance JSONL files")->required();

    std::optional<fs::path> train_path;
    std::optional<fs::path> index_path;
    auto* analyze = app.add_subcommand("analyze", "rank and relatedness analyses");
    analyze->add_option("--predictions", predictions_path, "prediction JSONL")->required();
    analyze->add_option("--train", train_path, "training corpus for relatedness");
    analyze->add_option("--index", index_path, "tool_index.json for relatedness");
    analyze->add_option("corpora", corpora, "instance JSONL files")->required();

    auto* stats = app.add_subcommand("stats", "corpus statistics");
    stats->add_option("corpora", corpora, "instance JSONL files")->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitMalformedInput;
    }

    try {
        if (*make_seeds) return cmd_make_seeds(seed_count, config, out);
        if (*synthesize) return cmd_synthesize(seeds_path, config, out);
        if (*split) return cmd_split(clusters_path, config, out);
        if (*compile) return cmd_compile(clusters_path, plan_path, config, out);
        if (*render) return cmd_render(corpora, config, out);
        if (*evaluate) return cmd_evaluate(corpora, predictions_path, config, out);
        if (*analyze) return cmd_analyze(corpora, predictions_path, train_path, index_path, config, out);
        if (*stats) return cmd_stats(corpora, config, out);
    } catch (const RemoteError& e) {
        err << "remote backend failure: " << e.what() << "\n";
        return kExitRemoteFailure;
    } catch (const TruncatedError& e) {
        err << "remote backend failure: " << e.what() << "\n";
        return kExitRemoteFailure;
    } catch (const SynthesisError& e) {
        err << "synthesis failed: " << e.what() << "\n";
        if (!e.raw_text().empty()) err << "last model output:\n" << e.raw_text() << "\n";
        return kExitSynthesisFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitMalformedInput;
    }
    return kExitMalformedInput;
}

}  // namespace gentool::cli
