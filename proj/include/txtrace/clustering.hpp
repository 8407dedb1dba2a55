#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "txtrace/chain.hpp"

namespace txtrace {

// Output-count threshold for the forced-address-reuse (dust) filter.
inline constexpr std::size_t kDustOutputThreshold = 100;

// Equal-output CoinJoin heuristic: some output value v appears in >= 3
// address-bearing slots, that count n does not exceed the input count, and
// the transaction carries at least 2n-1 outputs in total.
bool detect_coinjoin(const Transaction& tx);

// True iff some output value occurs in >= threshold address-bearing slots.
bool detect_dust(const Transaction& tx, std::size_t threshold = kDustOutputThreshold);

struct TxFlags {
    std::string txid;
    bool is_coinjoin = false;
    bool is_dust = false;
};

TxFlags classify_tx(const Transaction& tx);

// Multi-input partition of the chain's addresses. Frozen after build;
// cluster ids are FNV-1a of the lexicographically smallest member, so they
// are content-derived and stable across runs and platforms.
class ClusterMap {
public:
    // id for any address; addresses unseen at build time get the singleton
    // id derived from the address itself.
    uint64_t cluster_of(const std::string& address) const;
    std::size_t cluster_size(const std::string& address) const;

    // Members grouped per cluster id, members sorted; deterministic.
    std::unordered_map<uint64_t, std::vector<std::string>> members() const;

    // CSV "address,cluster_id" sorted by address, trailing newline.
    std::string export_csv() const;

private:
    friend ClusterMap build_clusters(const ChainStore& store);
    std::unordered_map<std::string, uint64_t> id_;  // address -> cluster id
};

ClusterMap build_clusters(const ChainStore& store);

}  // namespace txtrace
