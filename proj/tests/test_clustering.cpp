#include <doctest.h>

#include <map>
#include <set>

#include "test_util.hpp"
#include "txtrace/clustering.hpp"
#include "txtrace/rng.hpp"
#include "txtrace/util.hpp"

using namespace txtrace;
using txtest::ChainBuilder;

namespace {

Transaction make_tx(std::size_t n_in, const std::vector<uint64_t>& out_values) {
    Transaction tx;
    tx.txid = "t";
    for (std::size_t i = 0; i < n_in; ++i)
        tx.inputs.push_back({"in" + std::to_string(i), {}, 1000000000});
    for (std::size_t i = 0; i < out_values.size(); ++i)
        tx.outputs.push_back({"out" + std::to_string(i), {}, out_values[i]});
    return tx;
}

// Test-side oracle: connected components of the co-spend graph by BFS.
std::map<std::string, int> brute_force_components(const ChainStore& store) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& addr : store.sorted_addresses()) adj[addr];
    for (const auto& tx : store.txs()) {
        if (tx.coinbase || detect_coinjoin(tx)) continue;
        for (std::size_t i = 1; i < tx.inputs.size(); ++i) {
            adj[tx.inputs[0].address].insert(tx.inputs[i].address);
            adj[tx.inputs[i].address].insert(tx.inputs[0].address);
        }
    }
    std::map<std::string, int> comp;
    int next = 0;
    for (const auto& [start, _] : adj) {
        if (comp.count(start)) continue;
        std::vector<std::string> stack{start};
        comp[start] = next;
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            for (const auto& n : adj[cur])
                if (!comp.count(n)) {
                    comp[n] = next;
                    stack.push_back(n);
                }
        }
        ++next;
    }
    return comp;
}

bool partitions_equal(const ChainStore& store, const ClusterMap& map) {
    auto brute = brute_force_components(store);
    // same-component iff same cluster id, over all address pairs per component
    std::map<int, std::set<uint64_t>> comp_ids;
    std::map<uint64_t, std::set<int>> id_comps;
    for (const auto& [addr, comp] : brute) {
        uint64_t id = map.cluster_of(addr);
        comp_ids[comp].insert(id);
        id_comps[id].insert(comp);
    }
    for (const auto& [comp, ids] : comp_ids)
        if (ids.size() != 1) return false;
    for (const auto& [id, comps] : id_comps)
        if (comps.size() != 1) return false;
    return true;
}

std::string random_chain(Rng& rng, std::size_t txes, std::size_t addr_pool,
                         double coinjoin_rate = 0.0) {
    ChainBuilder b;
    auto addr = [&](uint64_t i) { return "a" + std::to_string(i); };
    for (std::size_t i = 0; i < txes; ++i) {
        if (coinjoin_rate > 0 && rng.uniform() < coinjoin_rate) {
            std::size_t n = 3 + rng.below(3);
            std::vector<ChainBuilder::Slot> ins, outs;
            for (std::size_t k = 0; k < n; ++k) {
                ins.push_back({addr(rng.below(addr_pool)), 2000000});
                outs.push_back({addr(rng.below(addr_pool)), 1000000});
            }
            for (std::size_t k = 0; k + 1 < n; ++k)
                outs.push_back({addr(rng.below(addr_pool)), 500000 + k});
            b.add(ins, outs);
            continue;
        }
        std::size_t n_in = 1 + rng.below(3);
        std::vector<ChainBuilder::Slot> ins;
        for (std::size_t k = 0; k < n_in; ++k)
            ins.push_back({addr(rng.below(addr_pool)), 1000000 + rng.below(99) * 7919});
        std::vector<ChainBuilder::Slot> outs{
            {addr(rng.below(addr_pool)), 400000 + rng.below(1000)},
            {addr(rng.below(addr_pool)), 500000 + rng.below(1000)}};
        b.add(ins, outs);
    }
    return b.text;
}

}  // namespace

TEST_CASE("coinjoin heuristic") {
    // 2 inputs, 2 distinct outputs: no equal-output group
    CHECK_FALSE(detect_coinjoin(make_tx(2, {100, 200})));
    // 5 inputs, 5 equal outputs plus 5 change outputs
    CHECK(detect_coinjoin(make_tx(5, {7, 7, 7, 7, 7, 1, 2, 3, 4, 5})));
    // group larger than the input count is not a coinjoin (but is dust-like)
    std::vector<uint64_t> hundred(100, 546);
    Transaction fan = make_tx(1, hundred);
    CHECK_FALSE(detect_coinjoin(fan));
    CHECK(detect_dust(fan));
    // coinbase never counts
    Transaction cb = make_tx(0, {5, 5, 5, 5, 5});
    cb.coinbase = true;
    CHECK_FALSE(detect_coinjoin(cb));
}

TEST_CASE("dust heuristic and monotonicity") {
    std::vector<uint64_t> values(99, 546);
    CHECK_FALSE(detect_dust(make_tx(1, values)));
    values.push_back(546);
    CHECK(detect_dust(make_tx(1, values)));
    // monotone: adding more equal outputs never flips true -> false
    values.push_back(546);
    CHECK(detect_dust(make_tx(1, values)));

    std::vector<uint64_t> distinct;
    for (uint64_t i = 0; i < 100; ++i) distinct.push_back(1000 + i);
    CHECK_FALSE(detect_dust(make_tx(1, distinct)));
}

TEST_CASE("multi-input transitivity") {
    ChainBuilder b;
    b.add({}, {{"A", 10000000}});
    b.add({}, {{"B", 10000000}});
    b.add({}, {{"C", 10000000}});
    b.add({{"A", 1000000}, {"B", 1000000}}, {{"X", 1900000}});
    b.add({{"B", 1000000}, {"C", 1000000}}, {{"Y", 1900000}});
    ChainStore store = b.store();
    ClusterMap map = build_clusters(store);
    CHECK(map.cluster_of("A") == map.cluster_of("B"));
    CHECK(map.cluster_of("B") == map.cluster_of("C"));
    CHECK(map.cluster_of("A") != map.cluster_of("X"));
}

TEST_CASE("single-input chains give singleton clusters") {
    ChainBuilder b;
    b.add({}, {{"A", 10000000}});
    b.add({{"A", 1000000}}, {{"B", 900000}});
    b.add({{"B", 900000}}, {{"C", 800000}});
    ClusterMap map = build_clusters(b.store());
    std::set<uint64_t> ids{map.cluster_of("A"), map.cluster_of("B"), map.cluster_of("C")};
    CHECK(ids.size() == 3);
}

TEST_CASE("unseen addresses get stable singleton ids") {
    ChainBuilder b;
    b.add({}, {{"A", 100}});
    ClusterMap map = build_clusters(b.store());
    uint64_t id1 = map.cluster_of("ghost");
    uint64_t id2 = map.cluster_of("ghost");
    CHECK(id1 == id2);
    CHECK(id1 != map.cluster_of("A"));
}

TEST_CASE("worked-example exchange addresses b and c share a cluster") {
    ChainStore store = ingest_chain(txtest::data_path("twoseed.jsonl"));
    ClusterMap map = build_clusters(store);
    CHECK(map.cluster_of("b") == map.cluster_of("c"));
    CHECK(map.cluster_of("a") == map.cluster_of("d"));  // co-spenders of f07
    CHECK(map.cluster_of("S1") != map.cluster_of("S2"));
}

TEST_CASE("union-find equals brute-force components on random chains") {
    Rng rng(42);
    for (int round = 0; round < 30; ++round) {
        std::string text = random_chain(rng, 50 + rng.below(200), 40 + rng.below(60), 0.1);
        ChainStore store = ingest_chain_text(text);
        CHECK(partitions_equal(store, build_clusters(store)));
    }
}

TEST_CASE("processing order does not change the partition") {
    // Same-height transactions keep their file order, so reversing the file
    // genuinely permutes union order.
    Rng rng(7);
    ChainBuilder b;
    auto addr = [](uint64_t i) { return "a" + std::to_string(i); };
    for (int i = 0; i < 80; ++i) {
        b.height = 100;  // single block
        std::vector<ChainBuilder::Slot> ins;
        std::size_t n_in = 1 + rng.below(3);
        for (std::size_t k = 0; k < n_in; ++k)
            ins.push_back({addr(rng.below(30)), 1000000});
        b.add(ins, {{addr(rng.below(30)), 500000}});
    }
    ChainStore store = ingest_chain_text(b.text);
    ClusterMap forward = build_clusters(store);

    std::vector<std::string> lines = split(b.text, '\n');
    lines.pop_back();
    std::string reversed;
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) reversed += *it + "\n";
    ChainStore store2 = ingest_chain_text(reversed);
    ClusterMap backward = build_clusters(store2);
    for (const auto& a : store.sorted_addresses())
        CHECK(forward.cluster_of(a) == backward.cluster_of(a));
}

TEST_CASE("coinjoin transactions never merge clusters") {
    ChainBuilder b;
    b.add({}, {{"A", 1000000000}});
    b.add({}, {{"B", 1000000000}});
    b.add({}, {{"C", 1000000000}});
    // CoinJoin-shaped: 3 inputs, 3 equal outputs + 2 change outputs
    b.add({{"A", 10000000}, {"B", 10000000}, {"C", 10000000}},
          {{"x1", 9000000}, {"x2", 9000000}, {"x3", 9000000}, {"c1", 1000001}, {"c2", 1000002}});
    ChainStore store = b.store();
    REQUIRE(detect_coinjoin(store.tx(3)));
    ClusterMap map = build_clusters(store);
    CHECK(map.cluster_of("A") != map.cluster_of("B"));
    CHECK(map.cluster_of("B") != map.cluster_of("C"));
}

TEST_CASE("cluster csv export is sorted and stable") {
    ChainBuilder b;
    b.add({}, {{"zeta", 100}});
    b.add({}, {{"alpha", 100}});
    ClusterMap map = build_clusters(b.store());
    std::string csv = map.export_csv();
    CHECK(csv.rfind("address,cluster_id\nalpha,", 0) == 0);
    CHECK(csv == build_clusters(b.store()).export_csv());
}
