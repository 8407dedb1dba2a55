#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "txtrace/crypto.hpp"
#include "txtrace/errors.hpp"
#include "txtrace/evaluation.hpp"
#include "txtrace/manifest.hpp"
#include "txtrace/pipeline.hpp"
#include "txtrace/relations.hpp"
#include "txtrace/synth.hpp"
#include "txtrace/util.hpp"

using namespace txtrace;

namespace {

// Only env-var knob: output directory override for relative output paths.
std::string out_path(const std::string& path) {
    const char* dir = std::getenv("TXTRACE_OUT_DIR");
    if (!dir || !*dir || path.empty() || path.front() == '/') return path;
    return std::string(dir) + "/" + path;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_manifest(RunManifest& manifest, const Timer& timer,
                    const std::string& primary_output) {
    manifest.wall_seconds = timer.seconds();
    manifest.write(out_path(primary_output + ".manifest.json"));
}

struct ClassifierChoice {
    std::string model_path;
    std::string exchange_list_path;
    bool no_classifier = false;

    void add_flags(CLI::App* cmd, bool required) {
        auto* model = cmd->add_option("--model", model_path, "trained model JSON");
        auto* list = cmd->add_option("--exchange-list", exchange_list_path,
                                     "fixed exchange address list (one per line)");
        auto* off = cmd->add_flag("--no-classifier", no_classifier,
                                  "run without the exchange classifier");
        model->excludes(list)->excludes(off);
        list->excludes(off);
        if (required) {
            // The choice changes results materially, so it must be explicit.
            cmd->callback([this]() {
                if (model_path.empty() && exchange_list_path.empty() && !no_classifier)
                    throw CLI::ValidationError(
                        "classifier use must be explicit: pass --model, --exchange-list, "
                        "or --no-classifier");
            });
        }
    }

    struct Loaded {
        std::optional<RandomForest> model;
        std::unique_ptr<ExchangeClassifier> classifier;
        bool enabled = false;
    };

    Loaded load() const {
        Loaded out;
        if (!model_path.empty()) {
            out.model = RandomForest::from_json(read_file(model_path));
            out.classifier = std::make_unique<ForestClassifier>(&*out.model);
            out.enabled = true;
        } else if (!exchange_list_path.empty()) {
            auto addrs = load_seeds(exchange_list_path);
            out.classifier = std::make_unique<FixedSetClassifier>(
                std::set<std::string>(addrs.begin(), addrs.end()));
            out.enabled = true;
        }
        return out;
    }
};

std::vector<double> default_epsilons() {
    return {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockchain transaction-graph forensics toolkit"};
    app.require_subcommand(1);

    // ---- ingest ----------------------------------------------------------
    struct {
        std::string chain, out;
        bool strict = false;
    } ingest_args;
    auto* cmd_ingest = app.add_subcommand("ingest", "validate and canonicalize a chain file");
    cmd_ingest->add_option("--chain", ingest_args.chain, "JSON Lines chain file")->required();
    cmd_ingest->add_option("--out", ingest_args.out, "canonical chain output")->required();
    cmd_ingest->add_flag("--strict-timestamps", ingest_args.strict,
                         "reject non-monotonic block timestamps");

    // ---- cluster ---------------------------------------------------------
    struct {
        std::string chain, out;
    } cluster_args;
    auto* cmd_cluster = app.add_subcommand("cluster", "compute multi-input clusters");
    cmd_cluster->add_option("--chain", cluster_args.chain)->required();
    cmd_cluster->add_option("--out", cluster_args.out, "cluster CSV output")->required();

    // ---- tagdb -----------------------------------------------------------
    struct {
        std::string chain, tags, out, review;
        bool no_propagate = false;
    } tagdb_args;
    auto* cmd_tagdb = app.add_subcommand("tagdb", "build the resolved tag database");
    cmd_tagdb->add_option("--chain", tagdb_args.chain)->required();
    cmd_tagdb->add_option("--tags", tagdb_args.tags, "tag CSV")->required();
    cmd_tagdb->add_option("--out", tagdb_args.out, "resolved database JSON")->required();
    cmd_tagdb->add_option("--review", tagdb_args.review, "unresolved records CSV");
    cmd_tagdb->add_flag("--no-propagate", tagdb_args.no_propagate,
                        "skip cluster-level tag propagation");

    // ---- train -----------------------------------------------------------
    struct {
        std::string chain, positive, negative, out, metrics, roc, features_out, mi_out;
        uint64_t seed = 0;
        int trees = 600, depth = 40, features_per_split = 6;
        double threshold = 0.5;
        std::size_t target_size = 0;
    } train_args;
    auto* cmd_train = app.add_subcommand("train", "train the exchange classifier");
    cmd_train->add_option("--chain", train_args.chain)->required();
    cmd_train->add_option("--positive", train_args.positive, "exchange seed addresses")
        ->required();
    cmd_train->add_option("--negative", train_args.negative, "non-exchange seed addresses")
        ->required();
    cmd_train->add_option("--seed", train_args.seed, "rng seed")->required();
    cmd_train->add_option("--out", train_args.out, "model JSON output")->required();
    cmd_train->add_option("--metrics", train_args.metrics, "metrics JSON output");
    cmd_train->add_option("--roc", train_args.roc, "ROC curve CSV output");
    cmd_train->add_option("--export-features", train_args.features_out,
                          "dataset feature matrix CSV");
    cmd_train->add_option("--mi-ranking", train_args.mi_out,
                          "mutual-information feature ranking CSV");
    cmd_train->add_option("--trees", train_args.trees);
    cmd_train->add_option("--depth", train_args.depth);
    cmd_train->add_option("--threshold", train_args.threshold);
    cmd_train->add_option("--features-per-split", train_args.features_per_split);
    cmd_train->add_option("--target-size", train_args.target_size,
                          "cap the balanced dataset size");

    // ---- explore ---------------------------------------------------------
    struct {
        std::string chain, tags, seeds, out, dot, direction = "back-and-forth", denylist;
        bool sdd = false, no_dust = false, no_coinjoin = false, no_propagate = false;
        std::size_t max_addresses = 0;
        std::size_t dust_threshold = kDustOutputThreshold;
        double max_seconds = 0;
    } explore_args;
    ClassifierChoice explore_classifier;
    auto* cmd_explore = app.add_subcommand("explore", "run the exploration from seeds");
    cmd_explore->add_option("--chain", explore_args.chain)->required();
    cmd_explore->add_option("--tags", explore_args.tags, "tag CSV (optional)");
    cmd_explore->add_option("--seeds", explore_args.seeds, "seed address file")->required();
    cmd_explore->add_option("--direction", explore_args.direction,
                            "back-and-forth | forward-only | backwards-only");
    cmd_explore->add_flag("--sdd", explore_args.sdd, "skip backward steps out of the seeds");
    cmd_explore->add_option("--max-addresses", explore_args.max_addresses,
                            "stop when the graph reaches this many addresses");
    cmd_explore->add_option("--max-seconds", explore_args.max_seconds);
    cmd_explore->add_flag("--no-dust-filter", explore_args.no_dust);
    cmd_explore->add_option("--dust-threshold", explore_args.dust_threshold,
                            "equal-output count that flags forced address reuse");
    cmd_explore->add_flag("--no-coinjoin-filter", explore_args.no_coinjoin);
    cmd_explore->add_flag("--no-tag-propagation", explore_args.no_propagate);
    cmd_explore->add_option("--denylist", explore_args.denylist,
                            "txids to ignore (researcher-injected)");
    cmd_explore->add_option("--out", explore_args.out, "graph JSON output")->required();
    cmd_explore->add_option("--dot", explore_args.dot, "graph DOT output");
    explore_classifier.add_flags(cmd_explore, true);

    // ---- relations -------------------------------------------------------
    struct {
        std::string graph, chain, tags, family = "campaign", report, evidence, out_graph;
        std::vector<std::string> oracles;
        bool no_propagate = false;
    } rel_args;
    auto* cmd_relations = app.add_subcommand("relations", "extract relation paths");
    cmd_relations->add_option("--graph", rel_args.graph, "exploration graph JSON")->required();
    cmd_relations->add_option("--chain", rel_args.chain)->required();
    cmd_relations->add_option("--tags", rel_args.tags, "tag CSV (optional)");
    cmd_relations->add_option("--family", rel_args.family, "campaign name for the report row");
    cmd_relations->add_option("--oracle", rel_args.oracles,
                              "family[:params.json]; repeatable (skidmap maps to pony)");
    cmd_relations->add_option("--report", rel_args.report, "summary CSV output")->required();
    cmd_relations->add_option("--evidence", rel_args.evidence, "evidence annex JSON");
    cmd_relations->add_option("--out-graph", rel_args.out_graph,
                              "graph JSON with oracle annotations");
    cmd_relations->add_flag("--no-tag-propagation", rel_args.no_propagate);

    // ---- synth -----------------------------------------------------------
    struct {
        std::string spec, out_chain, out_manifest, out_tags, out_seeds;
        uint64_t seed = 0;
        bool seed_set = false;
    } synth_args;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic chain with manifest");
    cmd_synth->add_option("--spec", synth_args.spec, "synth spec JSON");
    auto* synth_seed =
        cmd_synth->add_option("--seed", synth_args.seed, "rng seed (required)")->required();
    (void)synth_seed;
    cmd_synth->add_option("--out-chain", synth_args.out_chain)->required();
    cmd_synth->add_option("--out-manifest", synth_args.out_manifest)->required();
    cmd_synth->add_option("--out-tags", synth_args.out_tags);
    cmd_synth->add_option("--out-seeds", synth_args.out_seeds);

    // ---- eval ------------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("eval", "methodology experiments");
    cmd_eval->require_subcommand(1);

    struct {
        std::string chain, tags, model, seeds, out;
        uint64_t seed = 0;
        std::size_t repeats = 20;
        bool include_zero = true;
    } eps_args;
    auto* cmd_eps = cmd_eval->add_subcommand("epsilon", "classifier error-injection study");
    cmd_eps->add_option("--chain", eps_args.chain)->required();
    cmd_eps->add_option("--tags", eps_args.tags)->required();
    cmd_eps->add_option("--model", eps_args.model)->required();
    cmd_eps->add_option("--seeds", eps_args.seeds)->required();
    cmd_eps->add_option("--seed", eps_args.seed, "rng seed (required)")->required();
    cmd_eps->add_option("--repeats", eps_args.repeats);
    cmd_eps->add_option("--out", eps_args.out, "curve CSV output")->required();

    struct {
        std::string chain, tags, model, seeds, out;
        std::size_t limit = 20000;
    } abl_args;
    auto* cmd_abl = cmd_eval->add_subcommand("ablation", "with/without classifier comparison");
    cmd_abl->add_option("--chain", abl_args.chain)->required();
    cmd_abl->add_option("--tags", abl_args.tags)->required();
    cmd_abl->add_option("--model", abl_args.model)->required();
    cmd_abl->add_option("--seeds", abl_args.seeds)->required();
    cmd_abl->add_option("--limit", abl_args.limit, "address cap for the disabled run");
    cmd_abl->add_option("--out", abl_args.out, "ablation JSON output")->required();

    struct {
        std::string chain, tags, seeds, out;
    } dir_args;
    ClassifierChoice dir_classifier;
    auto* cmd_dir =
        cmd_eval->add_subcommand("directions", "back-and-forth vs forward-only comparison");
    cmd_dir->add_option("--chain", dir_args.chain)->required();
    cmd_dir->add_option("--tags", dir_args.tags)->required();
    cmd_dir->add_option("--seeds", dir_args.seeds)->required();
    cmd_dir->add_option("--out", dir_args.out)->required();
    dir_classifier.add_flags(cmd_dir, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Timer timer;
        if (*cmd_ingest) {
            IngestOptions opt;
            opt.strict_timestamps = ingest_args.strict;
            ChainStore store = ingest_chain(ingest_args.chain, opt);
            write_file(out_path(ingest_args.out), store.export_jsonl());
            RunManifest m;
            m.command = "ingest";
            m.config["strict_timestamps"] = ingest_args.strict ? "true" : "false";
            m.add_input(ingest_args.chain);
            m.add_output(out_path(ingest_args.out));
            write_manifest(m, timer, ingest_args.out);
            std::cout << "ingested " << store.txs().size() << " txes, "
                      << store.address_count() << " addresses\n";
        } else if (*cmd_cluster) {
            ChainStore store = ingest_chain(cluster_args.chain);
            ClusterMap clusters = build_clusters(store);
            write_file(out_path(cluster_args.out), clusters.export_csv());
            RunManifest m;
            m.command = "cluster";
            m.add_input(cluster_args.chain);
            m.add_output(out_path(cluster_args.out));
            write_manifest(m, timer, cluster_args.out);
            std::cout << "clustered " << store.address_count() << " addresses\n";
        } else if (*cmd_tagdb) {
            ChainStore store = ingest_chain(tagdb_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db =
                load_tag_database(tagdb_args.tags, clusters, !tagdb_args.no_propagate);
            write_file(out_path(tagdb_args.out), db.export_json());
            if (!tagdb_args.review.empty())
                write_file(out_path(tagdb_args.review), db.review_csv());
            RunManifest m;
            m.command = "tagdb";
            m.config["propagate"] = tagdb_args.no_propagate ? "false" : "true";
            m.add_input(tagdb_args.chain);
            m.add_input(tagdb_args.tags);
            m.add_output(out_path(tagdb_args.out));
            if (!tagdb_args.review.empty()) m.add_output(out_path(tagdb_args.review));
            write_manifest(m, timer, tagdb_args.out);
            std::cout << "resolved " << db.direct().size() << " addresses, "
                      << db.cluster_tags().size() << " clusters, " << db.unresolved().size()
                      << " unresolved\n";
        } else if (*cmd_train) {
            ChainStore store = ingest_chain(train_args.chain);
            ClusterMap clusters = build_clusters(store);
            ForestParams params;
            params.n_trees = train_args.trees;
            params.max_depth = train_args.depth;
            params.prediction_threshold = train_args.threshold;
            params.features_per_split = train_args.features_per_split;
            params.rng_seed = train_args.seed;
            TrainOutcome outcome =
                train_pipeline(store, clusters, load_seeds(train_args.positive),
                               load_seeds(train_args.negative), params, train_args.target_size);
            write_file(out_path(train_args.out), outcome.model.to_json());
            if (!train_args.metrics.empty())
                write_file(out_path(train_args.metrics), metrics_json(outcome));
            if (!train_args.roc.empty())
                write_file(out_path(train_args.roc), roc_csv(outcome.model, outcome.dataset.test));
            if (!train_args.features_out.empty()) {
                std::vector<std::string> addrs;
                for (const auto& row : outcome.dataset.rows) addrs.push_back(row.address);
                write_file(out_path(train_args.features_out),
                           export_feature_csv(store, clusters, addrs));
            }
            if (!train_args.mi_out.empty()) {
                std::vector<FeatureVector> rows;
                std::vector<int> labels;
                for (const auto& s : outcome.dataset.train) {
                    rows.push_back(s.x);
                    labels.push_back(s.label);
                }
                std::string csv = "feature,mi_nats\n";
                for (const auto& r : rank_features_mi(rows, labels))
                    csv += r.feature + "," + nlohmann::json(r.mi_nats).dump() + "\n";
                write_file(out_path(train_args.mi_out), csv);
            }
            RunManifest m;
            m.command = "train";
            m.config["seed"] = std::to_string(train_args.seed);
            m.config["trees"] = std::to_string(train_args.trees);
            m.config["depth"] = std::to_string(train_args.depth);
            m.add_input(train_args.chain);
            m.add_input(train_args.positive);
            m.add_input(train_args.negative);
            m.add_output(out_path(train_args.out));
            if (!train_args.metrics.empty()) m.add_output(out_path(train_args.metrics));
            write_manifest(m, timer, train_args.out);
            std::cout << "trained forest: test F1 " << outcome.test.f1 << " on "
                      << outcome.dataset.test.size() << " held-out rows\n";
        } else if (*cmd_explore) {
            ChainStore store = ingest_chain(explore_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db;
            if (!explore_args.tags.empty())
                db = load_tag_database(explore_args.tags, clusters,
                                       !explore_args.no_propagate);
            ExplorationConfig config;
            auto dir = direction_from_string(explore_args.direction);
            if (!dir) throw Error("unknown direction '" + explore_args.direction + "'");
            config.direction = *dir;
            config.sdd = explore_args.sdd;
            if (explore_args.max_addresses) config.max_addresses = explore_args.max_addresses;
            if (explore_args.max_seconds > 0) config.max_seconds = explore_args.max_seconds;
            config.dust_filter_enabled = !explore_args.no_dust;
            config.dust_threshold = explore_args.dust_threshold;
            config.coinjoin_filter_enabled = !explore_args.no_coinjoin;
            if (!explore_args.denylist.empty()) {
                auto ids = load_seeds(explore_args.denylist);
                config.txid_denylist.insert(ids.begin(), ids.end());
            }
            auto loaded = explore_classifier.load();
            config.classifier_enabled = loaded.enabled;
            ExplorationGraph graph = explore(store, clusters, db, loaded.classifier.get(),
                                             load_seeds(explore_args.seeds), config);
            for (const auto& w : graph.warnings) std::cerr << "warning: " << w << "\n";
            write_file(out_path(explore_args.out), graph.to_json());
            if (!explore_args.dot.empty())
                write_file(out_path(explore_args.dot), graph.to_dot());
            RunManifest m;
            m.command = "explore";
            m.config["direction"] = to_string(config.direction);
            m.config["sdd"] = config.sdd ? "true" : "false";
            m.config["classifier"] = loaded.enabled ? "enabled" : "disabled";
            m.add_input(explore_args.chain);
            if (!explore_args.tags.empty()) m.add_input(explore_args.tags);
            m.add_input(explore_args.seeds);
            m.add_output(out_path(explore_args.out));
            if (!explore_args.dot.empty()) m.add_output(out_path(explore_args.dot));
            write_manifest(m, timer, explore_args.out);
            std::cout << "graph: " << graph.stats.addresses << " addresses, "
                      << graph.stats.txes << " txes, " << graph.stats.components
                      << " components" << (graph.stats.limit_reached ? " (limit reached)" : "")
                      << "\n";
        } else if (*cmd_relations) {
            ChainStore store = ingest_chain(rel_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db;
            if (!rel_args.tags.empty())
                db = load_tag_database(rel_args.tags, clusters, !rel_args.no_propagate);
            ExplorationGraph graph = ExplorationGraph::from_json(read_file(rel_args.graph));
            OracleRegistry registry;
            for (const auto& spec : rel_args.oracles) {
                auto colon = spec.find(':');
                std::string family = spec.substr(0, colon);
                std::string params =
                    colon == std::string::npos ? "" : spec.substr(colon + 1);
                registry.register_family(family, params);
            }
            std::size_t detections = 0;
            if (!registry.empty()) detections = apply_oracles(graph, registry, store);
            RelationReport report = find_relations(graph, db, clusters);
            write_file(out_path(rel_args.report), report.summary_csv(rel_args.family));
            if (!rel_args.evidence.empty())
                write_file(out_path(rel_args.evidence), report.evidence_json());
            if (!rel_args.out_graph.empty())
                write_file(out_path(rel_args.out_graph), graph.to_json());
            RunManifest m;
            m.command = "relations";
            m.config["family"] = rel_args.family;
            m.add_input(rel_args.graph);
            m.add_input(rel_args.chain);
            if (!rel_args.tags.empty()) m.add_input(rel_args.tags);
            m.add_output(out_path(rel_args.report));
            if (!rel_args.evidence.empty()) m.add_output(out_path(rel_args.evidence));
            write_manifest(m, timer, rel_args.report);
            std::cout << "relations: " << report.relations.size() << " (evidence "
                      << report.evidence.size() << ", oracle hits " << detections << ")\n";
        } else if (*cmd_synth) {
            SynthSpec spec;
            if (!synth_args.spec.empty()) spec = SynthSpec::from_json(read_file(synth_args.spec));
            spec.rng_seed = synth_args.seed;
            SynthResult result = generate_chain(spec);
            write_file(out_path(synth_args.out_chain), result.chain_jsonl);
            write_file(out_path(synth_args.out_manifest), result.manifest_json);
            if (!synth_args.out_tags.empty())
                write_file(out_path(synth_args.out_tags), result.tags_csv);
            if (!synth_args.out_seeds.empty())
                write_file(out_path(synth_args.out_seeds), result.seeds_txt);
            RunManifest m;
            m.command = "synth";
            m.config["seed"] = std::to_string(spec.rng_seed);
            if (!synth_args.spec.empty()) m.add_input(synth_args.spec);
            m.add_output(out_path(synth_args.out_chain));
            m.add_output(out_path(synth_args.out_manifest));
            write_manifest(m, timer, synth_args.out_chain);
            std::cout << "generated chain + manifest\n";
        } else if (*cmd_eps) {
            ChainStore store = ingest_chain(eps_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db = load_tag_database(eps_args.tags, clusters, true);
            RandomForest model = RandomForest::from_json(read_file(eps_args.model));
            ForestClassifier classifier(&model);
            ExplorationConfig config;
            EpsilonStudyInputs inputs{store, clusters, db, classifier,
                                      load_seeds(eps_args.seeds), config};
            std::vector<double> eps = default_epsilons();
            if (eps_args.include_zero) eps.insert(eps.begin(), 0.0);
            auto points = run_epsilon_study(inputs, eps, eps_args.repeats, eps_args.seed);
            write_file(out_path(eps_args.out), epsilon_csv(points));
            RunManifest m;
            m.command = "eval epsilon";
            m.config["seed"] = std::to_string(eps_args.seed);
            m.config["repeats"] = std::to_string(eps_args.repeats);
            m.add_input(eps_args.chain);
            m.add_input(eps_args.tags);
            m.add_input(eps_args.model);
            m.add_input(eps_args.seeds);
            m.add_output(out_path(eps_args.out));
            write_manifest(m, timer, eps_args.out);
            std::cout << "epsilon study: " << points.size() << " points\n";
        } else if (*cmd_abl) {
            ChainStore store = ingest_chain(abl_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db = load_tag_database(abl_args.tags, clusters, true);
            RandomForest model = RandomForest::from_json(read_file(abl_args.model));
            ForestClassifier classifier(&model);
            ExplorationConfig config;
            AblationResult result = run_ablation(store, clusters, db, classifier,
                                                 load_seeds(abl_args.seeds), config,
                                                 abl_args.limit);
            write_file(out_path(abl_args.out), ablation_json(result));
            RunManifest m;
            m.command = "eval ablation";
            m.config["limit"] = std::to_string(abl_args.limit);
            m.add_input(abl_args.chain);
            m.add_input(abl_args.tags);
            m.add_input(abl_args.model);
            m.add_input(abl_args.seeds);
            m.add_output(out_path(abl_args.out));
            write_manifest(m, timer, abl_args.out);
            std::cout << "ablation: " << result.with_classifier.addresses << " vs "
                      << result.without_classifier.addresses << " addresses\n";
        } else if (*cmd_dir) {
            ChainStore store = ingest_chain(dir_args.chain);
            ClusterMap clusters = build_clusters(store);
            TagDatabase db = load_tag_database(dir_args.tags, clusters, true);
            auto loaded = dir_classifier.load();
            ExplorationConfig config;
            config.classifier_enabled = loaded.enabled;
            DirectionComparison cmp =
                compare_directions(store, clusters, db, loaded.classifier.get(),
                                   load_seeds(dir_args.seeds), config);
            write_file(out_path(dir_args.out), directions_json(cmp));
            RunManifest m;
            m.command = "eval directions";
            m.add_input(dir_args.chain);
            m.add_input(dir_args.tags);
            m.add_input(dir_args.seeds);
            m.add_output(out_path(dir_args.out));
            write_manifest(m, timer, dir_args.out);
            std::cout << "directions: node ratio " << cmp.node_ratio << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
