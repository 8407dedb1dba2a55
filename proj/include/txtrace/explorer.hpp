#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "txtrace/chain.hpp"
#include "txtrace/classifier.hpp"
#include "txtrace/clustering.hpp"
#include "txtrace/tags.hpp"

namespace txtrace {

enum class Direction { back_and_forth, forward_only, backwards_only };

std::optional<Direction> direction_from_string(const std::string& s);
const char* to_string(Direction d);

enum class NodeKind { seed, explored, tagged_stop, classifier_stop, unexplored, oracle_detected };

const char* to_string(NodeKind k);

struct ExplorationConfig {
    Direction direction = Direction::back_and_forth;
    bool sdd = false;  // skip backward steps out of the seeds
    std::optional<std::size_t> max_addresses;
    std::optional<double> max_seconds;
    bool classifier_enabled = true;
    bool dust_filter_enabled = true;
    bool coinjoin_filter_enabled = true;
    std::size_t dust_threshold = kDustOutputThreshold;
    std::set<std::string> txid_denylist;  // researcher-injected transactions
};

// Classification hook behind the real model, so the evaluation harness can
// inject errors and tests can pin verdicts.
struct ExchangeClassifier {
    virtual ~ExchangeClassifier() = default;
    virtual bool is_exchange(const std::string& address, const FeatureVector& features) = 0;
};

struct ForestClassifier : ExchangeClassifier {
    const RandomForest* model;
    explicit ForestClassifier(const RandomForest* m) : model(m) {}
    bool is_exchange(const std::string&, const FeatureVector& f) override {
        return model->predict(f).second;
    }
};

struct FixedSetClassifier : ExchangeClassifier {
    std::set<std::string> positives;
    std::size_t calls = 0;
    explicit FixedSetClassifier(std::set<std::string> p) : positives(std::move(p)) {}
    bool is_exchange(const std::string& address, const FeatureVector&) override {
        ++calls;
        return positives.count(address) != 0;
    }
};

struct NodeTag {
    std::string category;
    std::string label;
    std::string subtype;
    std::string role;        // "owner" or "beneficiary"
    std::string provenance;  // "direct", "cluster-propagated", "oracle"
    // Oracle detections carry their decoded payloads (domains or IPs).
    std::vector<std::string> evidence;
};

struct AddressNode {
    std::string address;
    NodeKind kind = NodeKind::unexplored;
    uint64_t cluster_id = 0;
    std::vector<NodeTag> tags;
};

struct TxNode {
    std::string txid;
    uint64_t total_out_satoshis = 0;
};

struct GraphEdge {
    std::string from;  // address id or txid
    std::string to;
    std::string txid;
    uint32_t slot = 0;       // lowest slot index for this address/direction
    uint64_t satoshis = 0;   // summed over the address's slots
};

struct ExplorationStats {
    std::size_t seeds = 0;
    std::size_t seeds_online_wallet = 0;
    std::size_t seeds_explored = 0;
    std::size_t components = 0;
    std::size_t addresses = 0;
    std::size_t txes = 0;
    std::size_t unexplored = 0;
    std::size_t tagged = 0;
    std::size_t classifier_exchanges = 0;
    bool limit_reached = false;
};

struct ExplorationGraph {
    std::map<std::string, AddressNode> addresses;
    std::map<std::string, TxNode> txs;
    // Keyed (from, to, txid) for dedup and canonical export order.
    std::map<std::tuple<std::string, std::string, std::string>, GraphEdge> edges;
    std::set<std::string> seed_set;
    ExplorationStats stats;
    // Non-fatal conditions (e.g. seeds with no on-chain transactions);
    // surfaced by the CLI, not part of the serialized graph.
    std::vector<std::string> warnings;

    std::size_t count_components() const;
    std::string to_json() const;
    std::string to_dot() const;
    static ExplorationGraph from_json(const std::string& text);
};

ExplorationGraph explore(const ChainStore& store, const ClusterMap& clusters,
                         const TagDatabase& tagdb, ExchangeClassifier* classifier,
                         const std::vector<std::string>& seeds,
                         const ExplorationConfig& config);

double compute_priority(std::size_t total_slots);

// "trace" expands; stops become frontier nodes.
enum class ClassifyDecision { trace, tag_stop, classifier_stop };

struct ClassifyOutcome {
    ClassifyDecision decision;
    std::optional<ResolvedTag> tag;
};

ClassifyOutcome classify_address(const std::string& address, const ChainStore& store,
                                 const ClusterMap& clusters, const TagDatabase& tagdb,
                                 ExchangeClassifier* classifier,
                                 std::set<uint64_t>& exchange_cluster_cache);

// One address per line, '#' comments allowed.
std::vector<std::string> load_seeds(const std::string& path);

}  // namespace txtrace
