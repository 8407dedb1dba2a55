#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "txtrace/explorer.hpp"
#include "txtrace/oracles.hpp"

namespace txtrace {

enum class RelationDirection { seed_to_entity, entity_to_seed };
enum class RelationDiscovery { exploration, mi_clustering_on_seeds };

struct Relation {
    std::string seed;
    uint64_t seed_cluster = 0;
    std::string category;
    std::string label;
    std::string matched_role;  // which tag role matched: owner/beneficiary/oracle
    RelationDirection direction = RelationDirection::seed_to_entity;
    RelationDiscovery discovery = RelationDiscovery::exploration;
    std::vector<std::string> path;  // alternating address/tx ids; empty for MI
    uint64_t path_value_satoshis = 0;

    std::string tag() const { return category + ":" + label; }
};

struct RelationReport {
    // One representative (shortest, then lexicographic) per
    // (seed cluster, tag, direction); the full multiset stays in `evidence`.
    std::vector<Relation> relations;
    std::vector<Relation> evidence;
    std::set<std::string> seed_set;

    // Table-7-style row: family,count,tag1,tag2,... with '*' marking
    // MI-clustering-on-seeds discoveries.
    std::string summary_csv(const std::string& family) const;
    std::string evidence_json() const;
};

// Tags oracle-satisfying addresses (malware:<family>, subtype "C&C
// signaling") and flips their node kind to oracle-detected.
std::size_t apply_oracles(ExplorationGraph& graph, const OracleRegistry& oracles,
                          const ChainStore& store);

RelationReport find_relations(const ExplorationGraph& graph, const TagDatabase& tagdb,
                              const ClusterMap& clusters);

struct ReportDiff {
    std::vector<std::string> added;    // "direction seed_cluster tag" keys in b only
    std::vector<std::string> removed;  // keys in a only
};

ReportDiff diff_reports(const RelationReport& a, const RelationReport& b);

}  // namespace txtrace
