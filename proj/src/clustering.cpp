#include "txtrace/clustering.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "txtrace/util.hpp"

namespace txtrace {

bool detect_coinjoin(const Transaction& tx) {
    if (tx.coinbase) return false;
    std::map<uint64_t, std::size_t> value_counts;
    for (const auto& s : tx.outputs) {
        if (s.is_data()) continue;
        ++value_counts[s.value];
    }
    for (const auto& [value, n] : value_counts) {
        if (n < 3) continue;
        if (n > tx.inputs.size()) continue;
        if (tx.outputs.size() >= 2 * n - 1) return true;
    }
    return false;
}

bool detect_dust(const Transaction& tx, std::size_t threshold) {
    std::map<uint64_t, std::size_t> value_counts;
    for (const auto& s : tx.outputs) {
        if (s.is_data()) continue;
        if (++value_counts[s.value] >= threshold) return true;
    }
    return false;
}

TxFlags classify_tx(const Transaction& tx) {
    return TxFlags{tx.txid, tx.coinbase ? false : detect_coinjoin(tx), detect_dust(tx)};
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<uint8_t> rank_;
};

}  // namespace

ClusterMap build_clusters(const ChainStore& store) {
    const auto& addresses = store.sorted_addresses();
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(addresses.size());
    for (std::size_t i = 0; i < addresses.size(); ++i) index[addresses[i]] = i;

    UnionFind uf(addresses.size());
    for (const auto& tx : store.txs()) {
        if (tx.coinbase || tx.inputs.size() < 2) continue;
        if (detect_coinjoin(tx)) continue;
        std::size_t first = index.at(tx.inputs[0].address);
        for (std::size_t i = 1; i < tx.inputs.size(); ++i)
            uf.unite(first, index.at(tx.inputs[i].address));
    }

    // The id seed is the smallest member; addresses are processed in sorted
    // order, so the first visit to a root names the cluster.
    ClusterMap map;
    std::unordered_map<std::size_t, uint64_t> root_id;
    map.id_.reserve(addresses.size());
    for (std::size_t i = 0; i < addresses.size(); ++i) {
        std::size_t root = uf.find(i);
        auto it = root_id.find(root);
        if (it == root_id.end()) it = root_id.emplace(root, fnv1a64(addresses[i])).first;
        map.id_[addresses[i]] = it->second;
    }
    return map;
}

uint64_t ClusterMap::cluster_of(const std::string& address) const {
    auto it = id_.find(address);
    if (it != id_.end()) return it->second;
    return fnv1a64(address);
}

std::size_t ClusterMap::cluster_size(const std::string& address) const {
    uint64_t id = cluster_of(address);
    std::size_t n = 0;
    for (const auto& [addr, cid] : id_)
        if (cid == id) ++n;
    return n == 0 ? 1 : n;
}

std::unordered_map<uint64_t, std::vector<std::string>> ClusterMap::members() const {
    std::unordered_map<uint64_t, std::vector<std::string>> out;
    for (const auto& [addr, cid] : id_) out[cid].push_back(addr);
    for (auto& [cid, v] : out) std::sort(v.begin(), v.end());
    return out;
}

std::string ClusterMap::export_csv() const {
    std::vector<const std::string*> addrs;
    addrs.reserve(id_.size());
    for (const auto& [addr, cid] : id_) addrs.push_back(&addr);
    std::sort(addrs.begin(), addrs.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    std::string csv = "address,cluster_id\n";
    for (const std::string* a : addrs) {
        csv += *a;
        csv += ',';
        csv += std::to_string(id_.at(*a));
        csv += '\n';
    }
    return csv;
}

}  // namespace txtrace
