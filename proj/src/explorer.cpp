#include "txtrace/explorer.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <queue>
#include <sstream>

#include "txtrace/errors.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

using nlohmann::ordered_json;

std::optional<Direction> direction_from_string(const std::string& s) {
    if (s == "back-and-forth" || s == "back_and_forth") return Direction::back_and_forth;
    if (s == "forward-only" || s == "forward_only") return Direction::forward_only;
    if (s == "backwards-only" || s == "backwards_only") return Direction::backwards_only;
    return std::nullopt;
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::back_and_forth: return "back-and-forth";
        case Direction::forward_only: return "forward-only";
        default: return "backwards-only";
    }
}

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::seed: return "seed";
        case NodeKind::explored: return "explored";
        case NodeKind::tagged_stop: return "tagged-stop";
        case NodeKind::classifier_stop: return "classifier-stop";
        case NodeKind::unexplored: return "unexplored";
        default: return "oracle-detected";
    }
}

double compute_priority(std::size_t total_slots) {
    return 1.0 / (1.0 + static_cast<double>(total_slots));
}

std::vector<std::string> load_seeds(const std::string& path) {
    std::vector<std::string> seeds;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        seeds.push_back(line.substr(start));
    }
    return seeds;
}

ClassifyOutcome classify_address(const std::string& address, const ChainStore& store,
                                 const ClusterMap& clusters, const TagDatabase& tagdb,
                                 ExchangeClassifier* classifier,
                                 std::set<uint64_t>& exchange_cluster_cache) {
    ClassifyOutcome out{ClassifyDecision::trace, std::nullopt};
    out.tag = tagdb.lookup(address, clusters);
    if (out.tag) {
        if (is_exploration_stop(*out.tag)) out.decision = ClassifyDecision::tag_stop;
        return out;  // non-service tags are traced with the tag attached
    }
    if (!classifier) return out;
    uint64_t cluster = clusters.cluster_of(address);
    if (exchange_cluster_cache.count(cluster)) {
        out.decision = ClassifyDecision::classifier_stop;
        return out;
    }
    FeatureVector f = extract_features(store, clusters, address);
    if (classifier->is_exchange(address, f)) {
        exchange_cluster_cache.insert(cluster);
        out.decision = ClassifyDecision::classifier_stop;
    }
    return out;
}

namespace {

struct WorkItem {
    double priority;
    uint64_t seq;
    std::string address;
    bool operator<(const WorkItem& other) const {
        if (priority != other.priority) return priority < other.priority;
        return seq > other.seq;  // FIFO on ties
    }
};

using EdgeKey = std::tuple<std::string, std::string, std::string>;

struct Explorer {
    const ChainStore& store;
    const ClusterMap& clusters;
    const TagDatabase& tagdb;
    ExchangeClassifier* classifier;
    const ExplorationConfig& config;

    Explorer(const ChainStore& s, const ClusterMap& c, const TagDatabase& t,
             ExchangeClassifier* cls, const ExplorationConfig& cfg)
        : store(s), clusters(c), tagdb(t), classifier(cls), config(cfg) {}

    ExplorationGraph graph;
    std::priority_queue<WorkItem> worklist;
    std::set<std::string> admitted;
    std::set<uint64_t> exchange_clusters;
    std::set<std::string> expanded;  // addresses whose expansion is in the graph
    uint64_t next_seq = 0;

    // Which expansion sources introduced each element; seeds are intrinsic.
    std::map<std::string, std::set<std::string>> addr_support;
    std::map<std::string, std::set<std::string>> tx_support;
    std::map<EdgeKey, std::set<std::string>> edge_support;

    std::vector<NodeTag> tag_attrs(const ResolvedTag& tag) const {
        std::vector<NodeTag> out;
        const char* prov =
            tag.provenance == TagProvenance::direct ? "direct" : "cluster-propagated";
        out.push_back({tag.owner.category, tag.owner.label, tag.owner.subtype, "owner",
                       prov, {}});
        if (tag.beneficiary)
            out.push_back({tag.beneficiary->category, tag.beneficiary->label,
                           tag.beneficiary->subtype, "beneficiary", prov, {}});
        return out;
    }

    std::size_t total_slots(const std::string& address) const {
        const AddressRecord* rec = store.find(address);
        if (!rec) return 0;
        std::size_t slots = 0;
        std::vector<uint32_t> all;
        std::set_union(rec->deposit_txs.begin(), rec->deposit_txs.end(),
                       rec->withdrawal_txs.begin(), rec->withdrawal_txs.end(),
                       std::back_inserter(all));
        for (uint32_t idx : all) slots += store.tx(idx).slot_count();
        return slots;
    }

    bool tx_filtered(const Transaction& tx) const {
        if (config.txid_denylist.count(tx.txid)) return true;
        if (config.coinjoin_filter_enabled && detect_coinjoin(tx)) return true;
        if (config.dust_filter_enabled && detect_dust(tx, config.dust_threshold)) return true;
        return false;
    }

    void enqueue(const std::string& address) {
        if (!admitted.insert(address).second) return;
        worklist.push({compute_priority(total_slots(address)), next_seq++, address});
    }

    // Add or refresh an address node; classification runs once on discovery.
    void discover(const std::string& address, const std::string& source) {
        auto it = graph.addresses.find(address);
        if (it != graph.addresses.end()) {
            if (!source.empty() && source != address) addr_support[address].insert(source);
            return;
        }
        AddressNode node;
        node.address = address;
        node.cluster_id = clusters.cluster_of(address);
        ClassifyOutcome outcome =
            classify_address(address, store, clusters, tagdb, classifier, exchange_clusters);
        if (outcome.tag) node.tags = tag_attrs(*outcome.tag);
        switch (outcome.decision) {
            case ClassifyDecision::tag_stop:
                node.kind = NodeKind::tagged_stop;
                break;
            case ClassifyDecision::classifier_stop:
                node.kind = NodeKind::classifier_stop;
                break;
            case ClassifyDecision::trace:
                node.kind = NodeKind::unexplored;
                break;
        }
        graph.addresses[address] = node;
        if (!source.empty() && source != address) addr_support[address].insert(source);
        if (node.kind == NodeKind::unexplored) enqueue(address);
        if (node.kind == NodeKind::classifier_stop &&
            exchange_clusters.count(node.cluster_id))
            reclassify_cluster(node.cluster_id, address);
    }

    void add_tx_node(const Transaction& tx, const std::string& source) {
        auto it = graph.txs.find(tx.txid);
        if (it == graph.txs.end())
            graph.txs[tx.txid] = TxNode{tx.txid, tx.output_value()};
        tx_support[tx.txid].insert(source);
    }

    void add_edge(const std::string& from, const std::string& to, const Transaction& tx,
                  uint32_t slot, uint64_t satoshis, const std::string& source) {
        // Re-touches from later expansions carry the identical collapsed
        // value, so the edge record is written once.
        EdgeKey key{from, to, tx.txid};
        graph.edges.emplace(key, GraphEdge{from, to, tx.txid, slot, satoshis});
        edge_support[key].insert(source);
    }

    // Collapse an address's slots on one side of a tx into a single edge.
    void add_address_tx_edges(const Transaction& tx, bool input_side,
                              const std::string& address, const std::string& source) {
        uint32_t min_slot = UINT32_MAX;
        uint64_t total = 0;
        const auto& slots = input_side ? tx.inputs : tx.outputs;
        for (uint32_t i = 0; i < slots.size(); ++i) {
            const TxSlot& s = slots[i];
            if (s.is_data() || s.address != address) continue;
            min_slot = std::min(min_slot, i);
            total += s.value;
        }
        if (min_slot == UINT32_MAX) return;
        if (input_side)
            add_edge(address, tx.txid, tx, min_slot, total, source);
        else
            add_edge(tx.txid, address, tx, min_slot, total, source);
    }

    // Late classifier positives flip their whole MI cluster; contributions
    // of flipped, already-expanded addresses are rolled back unless some
    // live expansion also introduced them.
    void reclassify_cluster(uint64_t cluster, const std::string& cause) {
        std::set<std::string> dead;
        for (auto& [addr, node] : graph.addresses) {
            if (addr == cause || node.cluster_id != cluster) continue;
            if (graph.seed_set.count(addr)) continue;
            if (node.kind == NodeKind::unexplored || node.kind == NodeKind::explored) {
                if (node.kind == NodeKind::explored) dead.insert(addr);
                node.kind = NodeKind::classifier_stop;
            }
        }
        if (!dead.empty()) prune(dead);
    }

    void prune(std::set<std::string> dead) {
        auto covered = [&](const std::set<std::string>& support) {
            return !support.empty() &&
                   std::all_of(support.begin(), support.end(),
                               [&](const std::string& s) { return dead.count(s) != 0; });
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = graph.addresses.begin(); it != graph.addresses.end();) {
                const std::string& addr = it->first;
                if (!graph.seed_set.count(addr) && covered(addr_support[addr])) {
                    if (expanded.count(addr)) dead.insert(addr);
                    admitted.erase(addr);
                    addr_support.erase(addr);
                    it = graph.addresses.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
            for (auto it = graph.txs.begin(); it != graph.txs.end();) {
                if (covered(tx_support[it->first])) {
                    tx_support.erase(it->first);
                    it = graph.txs.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
        for (auto it = graph.edges.begin(); it != graph.edges.end();) {
            const GraphEdge& e = it->second;
            bool endpoint_gone = (!graph.addresses.count(e.from) && !graph.txs.count(e.from)) ||
                                 (!graph.addresses.count(e.to) && !graph.txs.count(e.to));
            if (endpoint_gone || covered(edge_support[it->first])) {
                edge_support.erase(it->first);
                it = graph.edges.erase(it);
            } else {
                ++it;
            }
        }
    }

    // Expansion of one popped address: pull its non-filtered transactions
    // per the direction rules and attach the retrieved endpoints.
    bool expand(const std::string& address) {
        const AddressRecord* rec = store.find(address);
        if (!rec) return false;
        bool is_seed = graph.seed_set.count(address) != 0;

        // Online-wallet seeds (service owner, campaign beneficiary) are
        // never expanded forward and go backward only without sdd.
        bool ow_seed = false;
        if (is_seed) {
            const AddressNode& node = graph.addresses.at(address);
            for (const auto& t : node.tags)
                if (t.role == "owner" && is_service_category(t.category)) ow_seed = true;
        }

        bool backward = config.direction != Direction::forward_only;
        bool forward = config.direction != Direction::backwards_only;
        if (is_seed && config.sdd) backward = false;
        if (ow_seed) forward = false;

        bool did_expand = false;
        auto expand_tx = [&](uint32_t idx, bool via_deposit) {
            const Transaction& tx = store.tx(idx);
            if (tx_filtered(tx)) return;
            did_expand = true;
            add_tx_node(tx, address);
            if (config.direction == Direction::back_and_forth) {
                for (const auto& s : tx.inputs) {
                    discover(s.address, address);
                    add_address_tx_edges(tx, true, s.address, address);
                }
                for (const auto& s : tx.outputs) {
                    if (s.is_data()) continue;
                    discover(s.address, address);
                    add_address_tx_edges(tx, false, s.address, address);
                }
            } else if (config.direction == Direction::forward_only) {
                // via withdrawal: this address is an input; only outputs
                // are retrieved.
                (void)via_deposit;
                add_address_tx_edges(tx, true, address, address);
                for (const auto& s : tx.outputs) {
                    if (s.is_data()) continue;
                    discover(s.address, address);
                    add_address_tx_edges(tx, false, s.address, address);
                }
            } else {
                // backwards_only, via deposit: only input addresses.
                add_address_tx_edges(tx, false, address, address);
                for (const auto& s : tx.inputs) {
                    discover(s.address, address);
                    add_address_tx_edges(tx, true, s.address, address);
                }
            }
        };

        if (backward)
            for (uint32_t idx : rec->deposit_txs) expand_tx(idx, true);
        if (forward)
            for (uint32_t idx : rec->withdrawal_txs) expand_tx(idx, false);
        if (did_expand) expanded.insert(address);
        return did_expand;
    }

    void run(const std::vector<std::string>& seeds) {
        for (const auto& seed : seeds) {
            if (graph.seed_set.count(seed)) continue;
            graph.seed_set.insert(seed);
            AddressNode node;
            node.address = seed;
            node.kind = NodeKind::seed;
            node.cluster_id = clusters.cluster_of(seed);
            if (auto tag = tagdb.lookup(seed, clusters)) node.tags = tag_attrs(*tag);
            if (!store.find(seed))
                graph.warnings.push_back("seed " + seed +
                                         " has no transactions; kept as isolated node");
            graph.addresses[seed] = node;
            enqueue(seed);
        }
        graph.stats.seeds = graph.seed_set.size();
        for (const auto& seed : graph.seed_set) {
            const AddressNode& node = graph.addresses.at(seed);
            for (const auto& t : node.tags)
                if (t.role == "owner" && is_service_category(t.category)) {
                    ++graph.stats.seeds_online_wallet;
                    break;
                }
        }

        auto start = std::chrono::steady_clock::now();
        while (!worklist.empty()) {
            if (config.max_addresses && graph.addresses.size() >= *config.max_addresses) {
                graph.stats.limit_reached = true;
                break;
            }
            if (config.max_seconds) {
                double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                if (elapsed >= *config.max_seconds) {
                    graph.stats.limit_reached = true;
                    break;
                }
            }
            WorkItem item = worklist.top();
            worklist.pop();
            auto it = graph.addresses.find(item.address);
            if (it == graph.addresses.end()) continue;  // pruned
            if (it->second.kind != NodeKind::seed && it->second.kind != NodeKind::unexplored)
                continue;  // reclassified while queued
            bool did = expand(item.address);
            auto again = graph.addresses.find(item.address);
            if (again == graph.addresses.end()) continue;  // pruned by own expansion
            if (again->second.kind == NodeKind::classifier_stop) {
                // A positive discovered during this very expansion flipped
                // the expander's cluster; roll the expansion back.
                prune({item.address});
                continue;
            }
            if (again->second.kind == NodeKind::unexplored)
                again->second.kind = NodeKind::explored;
            if (graph.seed_set.count(item.address) && did) ++graph.stats.seeds_explored;
        }

        graph.stats.addresses = graph.addresses.size();
        graph.stats.txes = graph.txs.size();
        graph.stats.components = graph.count_components();
        for (const auto& [addr, node] : graph.addresses) {
            if (node.kind == NodeKind::unexplored) ++graph.stats.unexplored;
            if (node.kind == NodeKind::classifier_stop) ++graph.stats.classifier_exchanges;
            if (!node.tags.empty()) ++graph.stats.tagged;
        }
    }
};

}  // namespace

ExplorationGraph explore(const ChainStore& store, const ClusterMap& clusters,
                         const TagDatabase& tagdb, ExchangeClassifier* classifier,
                         const std::vector<std::string>& seeds,
                         const ExplorationConfig& config) {
    if (seeds.empty()) throw Error("exploration needs at least one seed");
    if (config.classifier_enabled && !classifier)
        throw Error("classifier enabled but no model supplied");
    Explorer ex(store, clusters, tagdb,
                config.classifier_enabled ? classifier : nullptr, config);
    ex.run(seeds);
    return ex.graph;
}

std::size_t ExplorationGraph::count_components() const {
    std::map<std::string, std::vector<const std::string*>> adj;
    for (const auto& [key, e] : edges) {
        adj[e.from].push_back(&e.to);
        adj[e.to].push_back(&e.from);
    }
    std::set<std::string> visited;
    std::size_t components = 0;
    for (const auto& [addr, node] : addresses) {
        if (visited.count(addr)) continue;
        ++components;
        std::vector<std::string> stack{addr};
        visited.insert(addr);
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const std::string* next : it->second)
                if (visited.insert(*next).second) stack.push_back(*next);
        }
    }
    return components;
}

std::string ExplorationGraph::to_json() const {
    ordered_json j;
    j["format"] = "txtrace-graph";
    j["version"] = 1;
    j["nodes"] = ordered_json::array();
    for (const auto& [addr, node] : addresses) {
        ordered_json n;
        n["id"] = addr;
        n["kind"] = "address";
        n["addr_kind"] = to_string(node.kind);
        n["tags"] = ordered_json::array();
        for (const auto& t : node.tags) {
            ordered_json tj;
            tj["category"] = t.category;
            tj["label"] = t.label;
            tj["subtype"] = t.subtype;
            tj["role"] = t.role;
            tj["provenance"] = t.provenance;
            if (!t.evidence.empty()) tj["evidence"] = t.evidence;
            n["tags"].push_back(tj);
        }
        n["cluster"] = node.cluster_id;
        j["nodes"].push_back(n);
    }
    for (const auto& [txid, node] : txs) {
        ordered_json n;
        n["id"] = txid;
        n["kind"] = "tx";
        n["total_btc"] = static_cast<double>(node.total_out_satoshis) / 1e8;
        j["nodes"].push_back(n);
    }
    j["edges"] = ordered_json::array();
    for (const auto& [key, e] : edges) {
        ordered_json ej;
        ej["from"] = e.from;
        ej["to"] = e.to;
        ej["txid"] = e.txid;
        ej["slot"] = e.slot;
        ej["satoshis"] = e.satoshis;
        j["edges"].push_back(ej);
    }
    ordered_json s;
    s["seeds"] = stats.seeds;
    s["seeds_online_wallet"] = stats.seeds_online_wallet;
    s["seeds_explored"] = stats.seeds_explored;
    s["components"] = stats.components;
    s["addresses"] = stats.addresses;
    s["txes"] = stats.txes;
    s["unexplored"] = stats.unexplored;
    s["tagged"] = stats.tagged;
    s["classifier_exchanges"] = stats.classifier_exchanges;
    s["limit_reached"] = stats.limit_reached;
    j["stats"] = s;
    return j.dump(2) + "\n";
}

std::string ExplorationGraph::to_dot() const {
    // Fill legend: seeds gray, ownership stops black, oracle hits red.
    auto fill = [](NodeKind k) {
        switch (k) {
            case NodeKind::seed: return "gray";
            case NodeKind::tagged_stop:
            case NodeKind::classifier_stop: return "black";
            case NodeKind::oracle_detected: return "red";
            case NodeKind::unexplored: return "lightgray";
            default: return "white";
        }
    };
    std::string dot = "digraph exploration {\n";
    for (const auto& [addr, node] : addresses) {
        dot += "  \"" + addr + "\" [shape=circle style=filled fillcolor=" + fill(node.kind);
        if (node.kind == NodeKind::tagged_stop || node.kind == NodeKind::classifier_stop)
            dot += " fontcolor=white";
        dot += "];\n";
    }
    for (const auto& [txid, node] : txs)
        dot += "  \"" + txid + "\" [shape=box];\n";
    for (const auto& [key, e] : edges)
        dot += "  \"" + e.from + "\" -> \"" + e.to + "\";\n";
    dot += "}\n";
    return dot;
}

ExplorationGraph ExplorationGraph::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid graph file: ") + e.what());
    }
    if (j.value("format", "") != "txtrace-graph") throw Error("not a txtrace graph file");
    ExplorationGraph g;
    for (const auto& n : j["nodes"]) {
        if (n["kind"] == "address") {
            AddressNode node;
            node.address = n["id"].get<std::string>();
            std::string kind = n["addr_kind"].get<std::string>();
            if (kind == "seed") node.kind = NodeKind::seed;
            else if (kind == "explored") node.kind = NodeKind::explored;
            else if (kind == "tagged-stop") node.kind = NodeKind::tagged_stop;
            else if (kind == "classifier-stop") node.kind = NodeKind::classifier_stop;
            else if (kind == "oracle-detected") node.kind = NodeKind::oracle_detected;
            else node.kind = NodeKind::unexplored;
            node.cluster_id = n["cluster"].get<uint64_t>();
            for (const auto& t : n["tags"]) {
                NodeTag tag{t["category"].get<std::string>(),
                            t["label"].get<std::string>(),
                            t["subtype"].get<std::string>(),
                            t["role"].get<std::string>(),
                            t["provenance"].get<std::string>(),
                            {}};
                if (t.contains("evidence"))
                    for (const auto& ev : t["evidence"])
                        tag.evidence.push_back(ev.get<std::string>());
                node.tags.push_back(std::move(tag));
            }
            if (node.kind == NodeKind::seed) g.seed_set.insert(node.address);
            g.addresses[node.address] = node;
        } else {
            TxNode node;
            node.txid = n["id"].get<std::string>();
            node.total_out_satoshis =
                static_cast<uint64_t>(n["total_btc"].get<double>() * 1e8 + 0.5);
            g.txs[node.txid] = node;
        }
    }
    for (const auto& ej : j["edges"]) {
        GraphEdge e;
        e.from = ej["from"].get<std::string>();
        e.to = ej["to"].get<std::string>();
        e.txid = ej["txid"].get<std::string>();
        e.slot = ej["slot"].get<uint32_t>();
        e.satoshis = ej["satoshis"].get<uint64_t>();
        g.edges[{e.from, e.to, e.txid}] = e;
    }
    const auto& s = j["stats"];
    g.stats.seeds = s["seeds"].get<std::size_t>();
    g.stats.seeds_online_wallet = s["seeds_online_wallet"].get<std::size_t>();
    g.stats.seeds_explored = s["seeds_explored"].get<std::size_t>();
    g.stats.components = s["components"].get<std::size_t>();
    g.stats.addresses = s["addresses"].get<std::size_t>();
    g.stats.txes = s["txes"].get<std::size_t>();
    g.stats.unexplored = s["unexplored"].get<std::size_t>();
    g.stats.tagged = s["tagged"].get<std::size_t>();
    g.stats.classifier_exchanges = s["classifier_exchanges"].get<std::size_t>();
    g.stats.limit_reached = s["limit_reached"].get<bool>();
    return g;
}

}  // namespace txtrace
