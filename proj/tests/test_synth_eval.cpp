#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "txtrace/evaluation.hpp"
#include "txtrace/pipeline.hpp"
#include "txtrace/synth.hpp"
#include "txtrace/util.hpp"

using namespace txtrace;

namespace {

SynthSpec relation_rich_spec() {
    SynthSpec spec;
    spec.rng_seed = 2024;
    spec.users = 60;
    spec.exchanges = 2;
    spec.exchange_addresses = 8;
    spec.background_txes = 250;
    spec.relation_seeds = 3;
    spec.relations_per_seed = 3;
    spec.relation_hops = 2;
    spec.relation_backward_paths = true;
    spec.hubs = 2;
    spec.hub_fanout = 20;
    spec.hub_payouts = 3;
    spec.foreign_tags_per_hub = 1;
    return spec;
}

struct EvalFixture {
    SynthResult synth;
    ChainStore store;
    ClusterMap clusters;
    TagDatabase tags;
    std::vector<std::string> seeds;
    RandomForest model;

    explicit EvalFixture(const SynthSpec& spec)
        : synth(generate_chain(spec)),
          store(ingest_chain_text(synth.chain_jsonl)),
          clusters(build_clusters(store)) {
        TagMultimap raw = import_tags_text(synth.tags_csv);
        tags = propagate_to_clusters(build_tag_database(raw), clusters);
        nlohmann::json manifest = nlohmann::json::parse(synth.manifest_json);
        for (const auto& s : manifest["seeds"]) seeds.push_back(s.get<std::string>());

        std::vector<std::string> positives, negatives;
        for (const auto& a : manifest["exchange_addresses"])
            positives.push_back(a.get<std::string>());
        for (const auto& a : manifest["hub_addresses"])
            positives.push_back(a.get<std::string>());
        for (const auto& a : manifest["user_addresses"])
            negatives.push_back(a.get<std::string>());
        ForestParams params;
        params.n_trees = 60;
        params.rng_seed = 7;
        TrainOutcome outcome =
            train_pipeline(store, clusters, positives, negatives, params, 0);
        model = std::move(outcome.model);
    }
};

}  // namespace

namespace {

struct EvalFixtureLite {
    SynthResult synth;
    ChainStore store;
    ClusterMap clusters;
    TagDatabase tags;
    std::vector<std::string> seeds;

    explicit EvalFixtureLite(const SynthSpec& spec)
        : synth(generate_chain(spec)),
          store(ingest_chain_text(synth.chain_jsonl)),
          clusters(build_clusters(store)) {
        TagMultimap raw = import_tags_text(synth.tags_csv);
        tags = propagate_to_clusters(build_tag_database(raw), clusters);
        nlohmann::json manifest = nlohmann::json::parse(synth.manifest_json);
        for (const auto& s : manifest["seeds"]) seeds.push_back(s.get<std::string>());
    }
};

}  // namespace

TEST_CASE("synthetic generation is deterministic per seed") {
    SynthSpec spec;
    spec.rng_seed = 5;
    spec.users = 20;
    spec.background_txes = 80;
    spec.cerber_addresses = 1;
    SynthResult a = generate_chain(spec);
    SynthResult b = generate_chain(spec);
    CHECK(a.chain_jsonl == b.chain_jsonl);
    CHECK(a.manifest_json == b.manifest_json);
    CHECK(a.tags_csv == b.tags_csv);
    spec.rng_seed = 6;
    CHECK(generate_chain(spec).chain_jsonl != a.chain_jsonl);
}

TEST_CASE("synthetic chains pass ingest validation and round-trip") {
    SynthSpec spec;
    spec.rng_seed = 9;
    spec.users = 30;
    spec.background_txes = 150;
    spec.cerber_addresses = 2;
    spec.pony_addresses = 2;
    spec.glupteba_addresses = 1;
    spec.dust_txes = 1;
    spec.coinjoin_txes = 1;
    SynthResult synth = generate_chain(spec);
    ChainStore store = ingest_chain_text(synth.chain_jsonl);
    CHECK(store.export_jsonl() == synth.chain_jsonl);
}

TEST_CASE("worked-example spec reproduces the hand-encoded fixture") {
    SynthSpec spec;
    spec.rng_seed = 1;
    spec.users = 0;
    spec.exchanges = 0;
    spec.exchange_addresses = 0;
    spec.background_txes = 0;
    spec.start_time = 1600000000;
    spec.two_seed_example = true;
    SynthResult synth = generate_chain(spec);
    ChainStore from_synth = ingest_chain_text(synth.chain_jsonl);
    ChainStore from_file = ingest_chain(txtest::data_path("twoseed.jsonl"));
    CHECK(from_synth.export_jsonl() == from_file.export_jsonl());
    CHECK(synth.tags_csv.find("c,service,exchange,poloniex") != std::string::npos);
    CHECK(synth.seeds_txt.find("S1") != std::string::npos);
}

TEST_CASE("planted structures are detected by their oracles and filters") {
    SynthSpec spec;
    spec.rng_seed = 33;
    spec.users = 40;
    spec.background_txes = 150;
    spec.cerber_addresses = 3;
    spec.pony_addresses = 3;
    spec.glupteba_addresses = 2;
    spec.dust_txes = 1;
    spec.near_dust_txes = 1;
    spec.coinjoin_txes = 2;
    SynthResult synth = generate_chain(spec);
    ChainStore store = ingest_chain_text(synth.chain_jsonl);
    nlohmann::json manifest = nlohmann::json::parse(synth.manifest_json);

    GluptebaParams gp;
    gp.keys = {hex_decode(manifest["glupteba_key_hex"].get<std::string>())};
    for (const auto& a : manifest["cerber_signaling"])
        CHECK(cerber_oracle(store, a.get<std::string>()).is_signaling);
    for (const auto& a : manifest["pony_signaling"]) {
        OracleResult r = pony_oracle(store, a.get<std::string>());
        CHECK(r.is_signaling);
        CHECK(*r.ratio == doctest::Approx(1.0));
    }
    for (const auto& a : manifest["glupteba_signaling"])
        CHECK(glupteba_oracle(store, a.get<std::string>(), gp).is_signaling);

    for (const auto& t : manifest["dust_txids"]) {
        auto idx = store.tx_index(t.get<std::string>());
        REQUIRE(idx.has_value());
        CHECK(detect_dust(store.tx(*idx)));
    }
    for (const auto& t : manifest["near_dust_txids"]) {
        auto idx = store.tx_index(t.get<std::string>());
        REQUIRE(idx.has_value());
        CHECK_FALSE(detect_dust(store.tx(*idx)));
    }
    ClusterMap clusters = build_clusters(store);
    for (const auto& t : manifest["coinjoin_txids"]) {
        auto idx = store.tx_index(t.get<std::string>());
        REQUIRE(idx.has_value());
        const Transaction& tx = store.tx(*idx);
        CHECK(detect_coinjoin(tx));
        // no cluster merges from the coinjoin
        std::set<uint64_t> ids;
        for (const auto& in : tx.inputs) ids.insert(clusters.cluster_of(in.address));
        CHECK(ids.size() == tx.inputs.size());
    }
}

TEST_CASE("error injection flips only the stated polarity at rate epsilon") {
    struct StubClassifier : ExchangeClassifier {
        bool verdict = false;
        bool is_exchange(const std::string&, const FeatureVector&) override {
            return verdict;
        }
    };
    StubClassifier stub;
    FeatureVector x{};

    for (InjectMode mode : {InjectMode::inject_cfp, InjectMode::inject_cfn}) {
        for (double eps : {0.1, 0.4}) {
            ErrorInjectingClassifier inj(&stub, mode, eps, 99);
            std::size_t flipped = 0;
            const std::size_t n = 4000;
            for (std::size_t i = 0; i < n; ++i) {
                stub.verdict = (mode == InjectMode::inject_cfn);  // eligible polarity
                if (inj.is_exchange("a", x) != stub.verdict) ++flipped;
                stub.verdict = (mode != InjectMode::inject_cfn);  // never flipped
                CHECK(inj.is_exchange("a", x) == stub.verdict);
            }
            double rate = static_cast<double>(flipped) / n;
            double sigma = std::sqrt(eps * (1 - eps) / n);
            CHECK(std::abs(rate - eps) < 3 * sigma + 1e-9);
        }
    }
}

TEST_CASE("epsilon study: zero epsilon keeps F1 at 1.0") {
    EvalFixture fx(relation_rich_spec());
    ForestClassifier classifier(&fx.model);
    ExplorationConfig config;
    EpsilonStudyInputs inputs{fx.store, fx.clusters, fx.tags, classifier, fx.seeds, config};
    auto points = run_epsilon_study(inputs, {0.0, 0.3}, 3, 77);
    REQUIRE(points.size() == 4);  // 2 modes x 2 epsilons
    for (const auto& p : points) {
        if (p.epsilon == 0.0) {
            CHECK(p.mean_f1 == doctest::Approx(1.0));
            CHECK(p.std_f1 == doctest::Approx(0.0));
        } else if (p.mode == InjectMode::inject_cfp) {
            CHECK(p.mean_f1 < 1.0);
        }
    }
    std::string csv = epsilon_csv(points);
    CHECK(csv.rfind("epsilon,mode,mean_f1,std_f1\n", 0) == 0);
    CHECK(csv.find("inject_cfp") != std::string::npos);
}

TEST_CASE("baseline exploration finds every planted relation") {
    EvalFixture fx(relation_rich_spec());
    ForestClassifier classifier(&fx.model);
    ExplorationConfig config;
    ExplorationGraph g =
        explore(fx.store, fx.clusters, fx.tags, &classifier, fx.seeds, config);
    RelationReport report = find_relations(g, fx.tags, fx.clusters);
    std::set<std::string> found;
    for (const auto& rel : report.relations) found.insert(rel.tag());
    nlohmann::json manifest = nlohmann::json::parse(fx.synth.manifest_json);
    for (const auto& planted : manifest["planted_relations"])
        CHECK(found.count(planted["tag"].get<std::string>()) == 1);
    // hubs stopped: foreign tags stay hidden at baseline
    for (const auto& rel : report.relations)
        CHECK(rel.label.rfind("foreign", 0) != 0);
}

TEST_CASE("ablation: disabling the classifier inflates the graph") {
    SynthSpec spec = relation_rich_spec();
    spec.hub_fanout = 40;
    spec.hub_payouts = 4;
    EvalFixture fx(spec);
    ForestClassifier classifier(&fx.model);
    ExplorationConfig config;
    AblationResult result =
        run_ablation(fx.store, fx.clusters, fx.tags, classifier, fx.seeds, config, 20000);
    CHECK(result.without_classifier.addresses > result.with_classifier.addresses);
    CHECK_FALSE(result.with_classifier.limit_reached);
    std::string json = ablation_json(result);
    CHECK(json.find("\"txtrace-ablation\"") != std::string::npos);

    SUBCASE("tight limit trips limit_reached") {
        AblationResult capped =
            run_ablation(fx.store, fx.clusters, fx.tags, classifier, fx.seeds, config, 30);
        CHECK(capped.without_classifier.limit_reached);
    }
}

TEST_CASE("ablation is a no-op without exchange-like nodes") {
    SynthSpec spec;
    spec.rng_seed = 51;
    spec.users = 0;
    spec.exchanges = 0;
    spec.exchange_addresses = 0;
    spec.background_txes = 0;
    spec.relation_seeds = 2;
    spec.relations_per_seed = 2;
    spec.relation_hops = 1;
    EvalFixtureLite fx(spec);
    FixedSetClassifier classifier({});  // nothing ever classifies positive
    ExplorationConfig config;
    AblationResult result =
        run_ablation(fx.store, fx.clusters, fx.tags, classifier, fx.seeds, config, 20000);
    CHECK(result.with_classifier.addresses == result.without_classifier.addresses);
    CHECK(result.with_classifier.txes == result.without_classifier.txes);
}

TEST_CASE("directions coincide when seeds only spend") {
    // a seed with no deposits and simple forward chains: both directions
    // produce the same graph
    txtest::ChainBuilder b;
    std::string t1 = b.add({{"spendseed", 1000000000}}, {{"x", 999900000}});
    b.add({{"x", 999900000}}, {{"y", 999800000}});
    ChainStore store = b.store();
    ClusterMap clusters = build_clusters(store);
    TagDatabase tags;
    DirectionComparison cmp =
        compare_directions(store, clusters, tags, nullptr, {"spendseed"},
                           [] {
                               ExplorationConfig c;
                               c.classifier_enabled = false;
                               return c;
                           }());
    CHECK(cmp.node_ratio == doctest::Approx(1.0));
    CHECK(cmp.edge_ratio == doctest::Approx(1.0));
    CHECK(cmp.relation_diff.added.empty());
    CHECK(cmp.relation_diff.removed.empty());
}

TEST_CASE("direction comparison reports backward-only relations") {
    EvalFixture fx(relation_rich_spec());
    ForestClassifier classifier(&fx.model);
    ExplorationConfig config;
    DirectionComparison cmp = compare_directions(fx.store, fx.clusters, fx.tags, &classifier,
                                                 fx.seeds, config);
    CHECK(cmp.nodes_forward_only < cmp.nodes_back_and_forth);
    CHECK(cmp.node_ratio < 1.0);
    CHECK(cmp.node_ratio > 0.0);
    // the planted entity->seed paths are only reachable backwards
    CHECK_FALSE(cmp.relation_diff.removed.empty());
    std::string json = directions_json(cmp);
    CHECK(json.find("relations_only_back_and_forth") != std::string::npos);
}
