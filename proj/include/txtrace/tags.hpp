#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "txtrace/clustering.hpp"

namespace txtrace {

enum class TagClass { malware, abuse, service, individual, benign };

const char* to_string(TagClass c);

// The 28 recognized categories and their class mapping.
std::optional<TagClass> category_class(const std::string& category);

// Categories that stop exploration (change of ownership into a service).
bool is_service_category(const std::string& category);

enum class SourceTrust { trusted, crowd };

struct TagRecord {
    std::string address;
    TagClass tag_class = TagClass::abuse;
    std::string category;
    std::string label;
    std::string subtype;            // optional
    std::vector<std::string> urls;  // may be empty for synthetic fixtures
    SourceTrust trust = SourceTrust::trusted;

    std::string tag() const { return category + ":" + label; }
};

enum class TagProvenance { direct, cluster_propagated };

struct ResolvedTag {
    TagRecord owner;
    std::optional<TagRecord> beneficiary;  // present only under a service owner
    TagProvenance provenance = TagProvenance::direct;
};

struct UnresolvedEntry {
    std::string key;  // address, or "cluster:<id>"
    std::vector<TagRecord> records;
    std::string reason;
};

struct TagDbConfig {
    std::size_t alias_edit_distance = 2;
};

// Raw import result: every source tag preserved, keyed by address.
using TagMultimap = std::map<std::string, std::vector<TagRecord>>;

// CSV: address,class,category,label,subtype,urls,trust (urls pipe-separated,
// subtype/urls/trust may be empty; '#' comment lines allowed).
TagMultimap import_tags(const std::string& path);
TagMultimap import_tags_text(const std::string& text);

// Address-level disambiguation; nullopt means Unresolvable.
std::optional<ResolvedTag> disambiguate_address(const std::vector<TagRecord>& tags,
                                                std::string* reason = nullptr);

class TagDatabase {
public:
    // Direct tag wins over cluster-propagated; nullopt when untagged.
    std::optional<ResolvedTag> lookup(const std::string& address,
                                      const ClusterMap& clusters) const;

    const std::map<std::string, ResolvedTag>& direct() const { return direct_; }
    const std::map<uint64_t, ResolvedTag>& cluster_tags() const { return cluster_; }
    const std::vector<UnresolvedEntry>& unresolved() const { return unresolved_; }
    bool propagated() const { return propagated_; }

    // Canonical JSON export of the resolved database.
    std::string export_json() const;
    // Review CSV: import schema plus a trailing reason column.
    std::string review_csv() const;

    friend TagDatabase build_tag_database(const TagMultimap&, const TagDbConfig&);
    friend TagDatabase propagate_to_clusters(const TagDatabase&, const ClusterMap&,
                                             const TagDbConfig&);

private:
    std::map<std::string, ResolvedTag> direct_;
    std::map<uint64_t, ResolvedTag> cluster_;
    std::vector<UnresolvedEntry> unresolved_;
    bool propagated_ = false;
};

// Address-level resolution over the raw multimap.
TagDatabase build_tag_database(const TagMultimap& raw, const TagDbConfig& config = {});

// Cluster-level expansion with double-ownership and alias handling.
TagDatabase propagate_to_clusters(const TagDatabase& db, const ClusterMap& clusters,
                                  const TagDbConfig& config = {});

bool is_exploration_stop(const ResolvedTag& tag);

}  // namespace txtrace
