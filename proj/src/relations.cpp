#include "txtrace/relations.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>

#include "txtrace/errors.hpp"

namespace txtrace {

using nlohmann::ordered_json;

std::size_t apply_oracles(ExplorationGraph& graph, const OracleRegistry& oracles,
                          const ChainStore& store) {
    std::size_t detections = 0;
    for (auto& [addr, node] : graph.addresses) {
        for (const auto& [family, oracle] : oracles.oracles) {
            OracleResult result = oracle(store, addr);
            if (!result.is_signaling) continue;
            bool already = std::any_of(node.tags.begin(), node.tags.end(),
                                       [&](const NodeTag& t) {
                                           return t.provenance == "oracle" && t.label == family;
                                       });
            if (already) continue;
            NodeTag tag{"malware", family, "C&C signaling", "owner", "oracle", {}};
            for (const auto& ev : result.evidence) tag.evidence.push_back(ev.payload);
            node.tags.push_back(std::move(tag));
            if (node.kind != NodeKind::seed) node.kind = NodeKind::oracle_detected;
            ++detections;
        }
    }
    return detections;
}

namespace {

struct PathSearch {
    const ExplorationGraph& graph;
    // adjacency along edge direction and against it
    std::map<std::string, std::vector<std::string>> fwd, rev;

    explicit PathSearch(const ExplorationGraph& g) : graph(g) {
        for (const auto& [key, e] : g.edges) {
            fwd[e.from].push_back(e.to);
            rev[e.to].push_back(e.from);
        }
        // Canonical neighbor order makes tie-breaking independent of
        // edge-map iteration details.
        for (auto& [k, v] : fwd) std::sort(v.begin(), v.end());
        for (auto& [k, v] : rev) std::sort(v.begin(), v.end());
    }

    // Shortest paths from seed following one direction only; BFS with
    // lexicographic parent preference at equal depth.
    std::map<std::string, std::string> parents(const std::string& seed, bool forward) const {
        const auto& adj = forward ? fwd : rev;
        std::map<std::string, std::string> parent;
        std::deque<std::string> queue{seed};
        parent[seed] = "";
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const std::string& next : it->second) {
                if (parent.count(next)) continue;
                parent[next] = cur;
                queue.push_back(next);
            }
        }
        return parent;
    }
};

uint64_t last_edge_value(const ExplorationGraph& g, const std::vector<std::string>& path) {
    if (path.size() < 2) return 0;
    const std::string& a = path[path.size() - 2];
    const std::string& b = path[path.size() - 1];
    // The edge key carries the txid, which is whichever endpoint is a tx node.
    const std::string& txid = g.txs.count(a) ? a : b;
    auto it = g.edges.find({a, b, txid});
    return it == g.edges.end() ? 0 : it->second.satoshis;
}

}  // namespace

RelationReport find_relations(const ExplorationGraph& graph, const TagDatabase& tagdb,
                              const ClusterMap& clusters) {
    RelationReport report;
    report.seed_set = graph.seed_set;

    // A node's candidate tags: every owner/beneficiary/oracle tag attached
    // during exploration or oracle application, plus current database tags,
    // so reports stay monotone when the database grows after exploration.
    // Classifier-only stops carry no tags and are never relation targets.
    auto node_tags = [&](const AddressNode& node) {
        std::vector<NodeTag> out = node.tags;
        if (auto db_tag = tagdb.lookup(node.address, clusters)) {
            auto add = [&](const TagRecord& rec, const char* role) {
                for (const auto& t : out)
                    if (t.category == rec.category && t.label == rec.label) return;
                const char* prov = db_tag->provenance == TagProvenance::direct
                                       ? "direct"
                                       : "cluster-propagated";
                out.push_back({rec.category, rec.label, rec.subtype, role, prov});
            };
            add(db_tag->owner, "owner");
            if (db_tag->beneficiary) add(*db_tag->beneficiary, "beneficiary");
        }
        return out;
    };

    // Tags of the seeds, excluded as targets.
    auto seed_tags = [&](const std::string& seed) {
        std::set<std::string> out;
        auto it = graph.addresses.find(seed);
        if (it != graph.addresses.end())
            for (const auto& t : node_tags(it->second)) out.insert(t.category + ":" + t.label);
        return out;
    };

    PathSearch search(graph);
    for (const std::string& seed : graph.seed_set) {
        std::set<std::string> excluded = seed_tags(seed);
        uint64_t seed_cluster = 0;
        if (auto it = graph.addresses.find(seed); it != graph.addresses.end())
            seed_cluster = it->second.cluster_id;

        for (bool forward : {true, false}) {
            auto parent = search.parents(seed, forward);
            for (const auto& [target, via] : parent) {
                if (target == seed) continue;
                auto node_it = graph.addresses.find(target);
                if (node_it == graph.addresses.end()) continue;  // tx node
                for (const auto& tag : node_tags(node_it->second)) {
                    std::string tag_str = tag.category + ":" + tag.label;
                    if (excluded.count(tag_str)) continue;
                    Relation rel;
                    rel.seed = seed;
                    rel.seed_cluster = seed_cluster;
                    rel.category = tag.category;
                    rel.label = tag.label;
                    rel.matched_role = tag.provenance == "oracle" ? "oracle" : tag.role;
                    rel.direction = forward ? RelationDirection::seed_to_entity
                                            : RelationDirection::entity_to_seed;
                    rel.discovery = RelationDiscovery::exploration;
                    std::vector<std::string> path;
                    for (std::string cur = target; !cur.empty(); cur = parent.at(cur))
                        path.push_back(cur);
                    std::reverse(path.begin(), path.end());
                    if (!forward) std::reverse(path.begin(), path.end());
                    // entity_to_seed paths are stored entity-first.
                    rel.path = path;
                    rel.path_value_satoshis = last_edge_value(graph, path);
                    report.evidence.push_back(rel);
                }
            }
        }

        // Seeds sharing an MI cluster with a tagged database address form a
        // relation with an empty path.
        for (const auto& [address, resolved] : tagdb.direct()) {
            if (clusters.cluster_of(address) != seed_cluster) continue;
            if (address == seed) continue;
            std::vector<std::pair<const TagRecord*, const char*>> tags = {
                {&resolved.owner, "owner"}};
            if (resolved.beneficiary) tags.push_back({&*resolved.beneficiary, "beneficiary"});
            for (const auto& [rec, role] : tags) {
                std::string tag_str = rec->tag();
                if (excluded.count(tag_str)) continue;
                Relation rel;
                rel.seed = seed;
                rel.seed_cluster = seed_cluster;
                rel.category = rec->category;
                rel.label = rec->label;
                rel.matched_role = role;
                rel.direction = RelationDirection::seed_to_entity;
                rel.discovery = RelationDiscovery::mi_clustering_on_seeds;
                report.evidence.push_back(rel);
            }
        }
    }

    // Deterministic evidence order.
    auto rel_key = [](const Relation& r) {
        return std::make_tuple(r.seed_cluster, r.tag(),
                               static_cast<int>(r.direction), r.path.size(), r.path, r.seed);
    };
    std::sort(report.evidence.begin(), report.evidence.end(),
              [&](const Relation& a, const Relation& b) { return rel_key(a) < rel_key(b); });

    // Representative: shortest path (exploration relations), tie-broken
    // lexicographically; MI relations stand on their own when no
    // exploration path exists for the same key.
    std::map<std::tuple<uint64_t, std::string, int>, const Relation*> best;
    for (const auto& rel : report.evidence) {
        std::tuple<uint64_t, std::string, int> key{rel.seed_cluster, rel.tag(),
                                                   static_cast<int>(rel.direction)};
        auto it = best.find(key);
        if (it == best.end()) {
            best[key] = &rel;
            continue;
        }
        const Relation& cur = *it->second;
        bool cur_mi = cur.discovery == RelationDiscovery::mi_clustering_on_seeds;
        bool rel_mi = rel.discovery == RelationDiscovery::mi_clustering_on_seeds;
        if (cur_mi != rel_mi) {
            if (cur_mi) it->second = &rel;  // exploration paths outrank MI hits
            continue;
        }
        if (std::make_tuple(rel.path.size(), rel.path, rel.seed) <
            std::make_tuple(cur.path.size(), cur.path, cur.seed))
            it->second = &rel;
    }
    for (const auto& [key, rel] : best) report.relations.push_back(*rel);
    return report;
}

std::string RelationReport::summary_csv(const std::string& family) const {
    std::set<std::string> tags;
    for (const auto& rel : relations) {
        std::string t = rel.tag();
        if (rel.discovery == RelationDiscovery::mi_clustering_on_seeds) t += "*";
        tags.insert(t);
    }
    std::string csv = family + "," + std::to_string(tags.size());
    for (const auto& t : tags) csv += "," + t;
    csv += "\n";
    return csv;
}

std::string RelationReport::evidence_json() const {
    ordered_json j;
    j["format"] = "txtrace-relations";
    j["version"] = 1;
    auto emit = [](const Relation& r) {
        ordered_json rj;
        rj["seed"] = r.seed;
        rj["seed_cluster"] = r.seed_cluster;
        rj["tag"] = r.tag();
        rj["category"] = r.category;
        rj["label"] = r.label;
        rj["matched_role"] = r.matched_role;
        rj["direction"] = r.direction == RelationDirection::seed_to_entity
                              ? "seed-to-entity"
                              : "entity-to-seed";
        rj["discovery"] = r.discovery == RelationDiscovery::exploration
                              ? "exploration"
                              : "mi-clustering-on-seeds";
        rj["path"] = r.path;
        rj["path_value_satoshis"] = r.path_value_satoshis;
        return rj;
    };
    j["relations"] = ordered_json::array();
    for (const auto& r : relations) j["relations"].push_back(emit(r));
    j["evidence"] = ordered_json::array();
    for (const auto& r : evidence) j["evidence"].push_back(emit(r));
    return j.dump(2) + "\n";
}

ReportDiff diff_reports(const RelationReport& a, const RelationReport& b) {
    if (a.seed_set != b.seed_set)
        throw SeedMismatch("relation reports cover different seed sets");
    auto keys = [](const RelationReport& r) {
        std::set<std::string> out;
        for (const auto& rel : r.relations)
            out.insert(std::string(rel.direction == RelationDirection::seed_to_entity
                                       ? "seed-to-entity "
                                       : "entity-to-seed ") +
                       std::to_string(rel.seed_cluster) + " " + rel.tag());
        return out;
    };
    std::set<std::string> ka = keys(a), kb = keys(b);
    ReportDiff diff;
    std::set_difference(kb.begin(), kb.end(), ka.begin(), ka.end(),
                        std::back_inserter(diff.added));
    std::set_difference(ka.begin(), ka.end(), kb.begin(), kb.end(),
                        std::back_inserter(diff.removed));
    return diff;
}

}  // namespace txtrace
