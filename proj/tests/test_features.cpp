#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "txtrace/errors.hpp"
#include "txtrace/features.hpp"
#include "txtrace/rng.hpp"

using namespace txtrace;
using txtest::ChainBuilder;

namespace {

// 5-tx fixture around address X; expected values computed by hand per
// feature (see the assertions).
ChainBuilder x_fixture(uint64_t scale = 1) {
    ChainBuilder b;
    auto v = [&](uint64_t sat) { return sat * scale; };
    b.height = 100;
    b.time = 1600000000;
    b.add({}, {{"X", v(100000000)}});
    b.height = 101;
    b.time = 1600000600;
    b.add({{"A", v(50000000)}, {"B", v(30000000)}},
          {{"X", v(60000000)}, {"C", v(19900000)}});
    b.height = 103;
    b.time = 1600001800;
    b.add({{"X", v(100000000)}}, {{"D", v(99900000)}});
    b.height = 105;
    b.time = 1600003000;
    b.add({{"X", v(60000000)}, {"E", v(40000000)}},
          {{"X", v(30000000)}, {"F", v(69900000)}});
    b.height = 200;
    b.time = 1600060000;
    b.add({{"X", v(30000000)}}, {{"G", v(29900000)}});
    return b;
}

}  // namespace

TEST_CASE("feature names are the canonical 42") {
    CHECK(feature_names().size() == 42);
    CHECK(feature_names()[0] == "type");
    CHECK(feature_names()[41] == "w_per_tx");
    CHECK(feature_index("yearly_d_txes") == 11);
    CHECK(feature_index("nope") == -1);
}

TEST_CASE("single-deposit address arithmetic") {
    ChainBuilder b;
    b.add({}, {{"A", 100000000}});
    ChainStore store = b.store();
    ClusterMap clusters = build_clusters(store);
    FeatureVector f = extract_features(store, clusters, "A");
    CHECK(f[feature_index("deposited")] == 100000000.0);
    CHECK(f[feature_index("withdrawn")] == 0.0);
    CHECK(f[feature_index("balance")] == 100000000.0);
    CHECK(f[feature_index("txes")] == 1.0);
    CHECK(f[feature_index("tx_ratio")] == 0.0);  // zero-denominator rule
    CHECK(f[feature_index("utxos")] == 1.0);
}

TEST_CASE("zero-activity address is all zeros except the type encoding") {
    ChainBuilder b;
    b.add({}, {{"A", 100}});
    ChainStore store = b.store();
    ClusterMap clusters = build_clusters(store);
    FeatureVector f = extract_features(store, clusters, "ghost");
    CHECK(f[0] == static_cast<double>(static_cast<int>(AddrType::other)));
    for (std::size_t i = 1; i < kFeatureCount; ++i) CHECK(f[i] == 0.0);
}

TEST_CASE("hand-computed oracle for the 5-tx fixture") {
    ChainStore store = x_fixture().store();
    ClusterMap clusters = build_clusters(store);
    FeatureVector f = extract_features(store, clusters, "X");

    auto at = [&](const char* name) { return f[feature_index(name)]; };
    CHECK(at("type") == 4.0);
    CHECK(at("equiv_addrs") == 0.0);
    CHECK(at("lifetime") == 60000.0);
    CHECK(at("timespan_d") == 3000.0);
    CHECK(at("timespan_w") == 58200.0);
    CHECK(at("activity") == 2.0);
    CHECK(at("activity_d") == 1.0);
    CHECK(at("activity_w") == 2.0);
    CHECK(at("idle_time") == 0.0);
    CHECK(at("daily_d_rate") == doctest::Approx(3 * 86400.0 / 60000.0));
    CHECK(at("daily_w_rate") == doctest::Approx(3 * 86400.0 / 60000.0));
    CHECK(at("yearly_d_txes") == doctest::Approx(3 * 365.25 * 86400.0 / 60000.0));
    CHECK(at("yearly_w_txes") == doctest::Approx(3 * 365.25 * 86400.0 / 60000.0));
    CHECK(at("balance") == 0.0);
    CHECK(at("deposited") == 190000000.0);
    CHECK(at("withdrawn") == 190000000.0);
    CHECK(at("txes") == 5.0);
    CHECK(at("txes_out") == 3.0);
    CHECK(at("txes_in") == 3.0);
    CHECK(at("addr_as_change") == doctest::Approx(0.2));
    CHECK(at("outputs") == 3.0);
    CHECK(at("inputs") == 3.0);
    CHECK(at("utxos") == 0.0);
    CHECK(at("tx_size_mean") == 0.0);
    CHECK(at("tx_weight_mean") == 0.0);
    CHECK(at("tx_fee_mean") == doctest::Approx(80000.0));
    CHECK(at("ins_age_mean") == doctest::Approx(34.0));  // (3 + 4 + 95) / 3
    CHECK(at("coinbase") == 1.0);
    CHECK(at("coinjoin") == 0.0);
    CHECK(at("coinjoin_out") == 0.0);
    CHECK(at("coinjoin_in") == 0.0);
    CHECK(at("tx_ratio") == 1.0);
    CHECK(at("outs_per_tx") == doctest::Approx(7.0 / 5));
    CHECK(at("ins_per_tx") == doctest::Approx(6.0 / 5));
    CHECK(at("outs_per_out") == doctest::Approx(5.0 / 3));
    CHECK(at("ins_per_out") == doctest::Approx(4.0 / 3));
    CHECK(at("outs_per_in") == doctest::Approx(4.0 / 3));
    CHECK(at("ins_per_in") == doctest::Approx(4.0 / 3));
    CHECK(at("profit_rate") == doctest::Approx(190000000.0 / 60000));
    CHECK(at("expense_rate") == doctest::Approx(190000000.0 / 60000));
    CHECK(at("d_per_tx") == doctest::Approx(190000000.0 / 3));
    CHECK(at("w_per_tx") == doctest::Approx(190000000.0 / 3));
}

TEST_CASE("feature determinism") {
    ChainStore store = x_fixture().store();
    ClusterMap clusters = build_clusters(store);
    FeatureVector a = extract_features(store, clusters, "X");
    FeatureVector b = extract_features(store, clusters, "X");
    CHECK(a == b);
}

TEST_CASE("scale covariance: amounts scale, counts and times do not") {
    ChainStore base = x_fixture(1).store();
    ChainStore scaled = x_fixture(10).store();
    ClusterMap cb = build_clusters(base);
    ClusterMap cs = build_clusters(scaled);
    FeatureVector f1 = extract_features(base, cb, "X");
    FeatureVector f10 = extract_features(scaled, cs, "X");
    std::set<int> amount_features = {
        feature_index("balance"),      feature_index("deposited"),
        feature_index("withdrawn"),    feature_index("tx_fee_mean"),
        feature_index("profit_rate"),  feature_index("expense_rate"),
        feature_index("d_per_tx"),     feature_index("w_per_tx")};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (amount_features.count(static_cast<int>(i)))
            CHECK(f10[i] == doctest::Approx(10.0 * f1[i]));
        else
            CHECK(f10[i] == doctest::Approx(f1[i]));
    }
}

TEST_CASE("tx size and weight come from the optional metadata") {
    std::string line =
        R"({"txid":"aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa","height":1,"time":1000,"coinbase":true,"in":[],"out":[{"addr":"A","value":1}],"size":250,"weight":1000})";
    ChainStore store = ingest_chain_text(line + "\n");
    ClusterMap clusters = build_clusters(store);
    FeatureVector f = extract_features(store, clusters, "A");
    CHECK(f[feature_index("tx_size_mean")] == 250.0);
    CHECK(f[feature_index("tx_weight_mean")] == 1000.0);
}

TEST_CASE("address type and equivalent-address metadata feed the features") {
    std::string line =
        R"({"txid":"bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb","height":1,"time":1000,"coinbase":true,"in":[],"out":[{"addr":"3scripty","value":7}],"addr_types":{"3scripty":"scripthash"},"equiv":{"3scripty":4}})";
    ChainStore store = ingest_chain_text(line + "\n");
    ClusterMap clusters = build_clusters(store);
    FeatureVector f = extract_features(store, clusters, "3scripty");
    CHECK(f[feature_index("type")] == 1.0);  // scripthash slot in the enum table
    CHECK(f[feature_index("equiv_addrs")] == 4.0);
}

TEST_CASE("z-score normalizer") {
    std::vector<FeatureVector> rows(2);
    rows[0].fill(0.0);
    rows[1].fill(2.0);
    NormalizationParams p = fit_normalizer(rows);
    CHECK(p.mean[0] == 1.0);
    CHECK(p.stddev[0] == 1.0);
    CHECK(p.transform(rows[0])[0] == -1.0);
    CHECK(p.transform(rows[1])[0] == 1.0);

    SUBCASE("constant feature maps to zero") {
        std::vector<FeatureVector> c(3);
        for (auto& r : c) r.fill(7.0);
        NormalizationParams cp = fit_normalizer(c);
        CHECK(cp.transform(c[0])[0] == 0.0);
    }

    SUBCASE("insufficient data") {
        std::vector<FeatureVector> one(1);
        CHECK_THROWS_AS(fit_normalizer(one), InsufficientData);
    }

    SUBCASE("random matrix re-normalizes to zero mean unit std") {
        Rng rng(11);
        std::vector<FeatureVector> m(100);
        for (auto& r : m)
            for (auto& x : r) x = rng.uniform() * 100 - 50;
        NormalizationParams mp = fit_normalizer(m);
        std::vector<FeatureVector> t;
        for (const auto& r : m) t.push_back(mp.transform(r));
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            double mean = 0;
            for (const auto& r : t) mean += r[i];
            mean /= static_cast<double>(t.size());
            double var = 0;
            for (const auto& r : t) var += (r[i] - mean) * (r[i] - mean);
            var /= static_cast<double>(t.size());
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("mutual information ranking") {
    Rng rng(5);
    std::vector<FeatureVector> rows(200);
    std::vector<int> labels(200);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        labels[i] = i % 2;
        rows[i].fill(0.0);
        rows[i][0] = labels[i];               // perfect predictor
        rows[i][1] = 42.0;                    // constant: MI 0
        rows[i][2] = rng.uniform();           // independent noise
    }
    auto ranking = rank_features_mi(rows, labels, 20);
    REQUIRE(ranking.size() == kFeatureCount);
    CHECK(ranking[0].feature == "type");  // feature 0
    CHECK(ranking[0].mi_nats == doctest::Approx(std::log(2.0)).epsilon(0.01));
    for (const auto& r : ranking) {
        CHECK(r.mi_nats >= 0.0);
        CHECK(r.mi_nats <= std::log(2.0) + 1e-9);  // <= H(label)
    }
    // constant feature has zero MI
    for (const auto& r : ranking)
        if (r.feature == "equiv_addrs") CHECK(r.mi_nats == 0.0);
}

TEST_CASE("feature csv export has the canonical header") {
    ChainStore store = x_fixture().store();
    ClusterMap clusters = build_clusters(store);
    std::string csv = export_feature_csv(store, clusters, {"X"});
    CHECK(csv.rfind("address,type,equiv_addrs,lifetime", 0) == 0);
    CHECK(csv.find("\nX,4") != std::string::npos);
}
