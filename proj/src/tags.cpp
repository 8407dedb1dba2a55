#include "txtrace/tags.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "txtrace/errors.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

using nlohmann::ordered_json;

const char* to_string(TagClass c) {
    switch (c) {
        case TagClass::malware: return "malware";
        case TagClass::abuse: return "abuse";
        case TagClass::service: return "service";
        case TagClass::individual: return "individual";
        default: return "benign";
    }
}

namespace {

const std::map<std::string, TagClass>& category_table() {
    static const std::map<std::string, TagClass> table = {
        {"sextortion", TagClass::abuse},
        {"miscabuse", TagClass::abuse},
        {"mining", TagClass::service},
        {"mixuser", TagClass::individual},
        {"ransomware", TagClass::malware},
        {"clipper", TagClass::malware},
        {"username", TagClass::individual},
        {"exchange", TagClass::service},
        {"terrorism", TagClass::abuse},
        {"theft", TagClass::abuse},
        {"gambling", TagClass::service},
        {"onlinewallet", TagClass::service},
        {"defi", TagClass::service},
        {"scam", TagClass::abuse},
        {"mixer", TagClass::service},
        {"ponzi", TagClass::abuse},
        {"service", TagClass::service},
        {"malware", TagClass::malware},
        {"tormarket", TagClass::service},
        {"payment", TagClass::service},
        {"donation", TagClass::benign},
        {"state-sponsored", TagClass::abuse},
        {"drugtrafficking", TagClass::abuse},
        {"bankingtrojan", TagClass::malware},
        {"cryptojacking", TagClass::malware},
        {"miscbenign", TagClass::benign},
        {"webskimming", TagClass::malware},
        {"usgov", TagClass::benign},
    };
    return table;
}

const std::set<std::string>& service_stop_set() {
    static const std::set<std::string> set = {
        "exchange", "onlinewallet", "mixer",   "tormarket", "gambling",
        "payment",  "mining",       "service", "defi",
    };
    return set;
}

}  // namespace

std::optional<TagClass> category_class(const std::string& category) {
    auto it = category_table().find(category);
    if (it == category_table().end()) return std::nullopt;
    return it->second;
}

bool is_service_category(const std::string& category) {
    return service_stop_set().count(category) != 0;
}

bool is_exploration_stop(const ResolvedTag& tag) {
    return is_service_category(tag.owner.category);
}

TagMultimap import_tags_text(const std::string& text) {
    TagMultimap out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.rfind("address,", 0) == 0) continue;  // header
        auto fields = split(line, ',');
        if (fields.size() != 7)
            throw MalformedRow(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
        TagRecord rec;
        rec.address = fields[0];
        if (rec.address.empty()) throw MalformedRow(line_no, "empty address");
        rec.category = fields[2];
        auto cls = category_class(rec.category);
        if (!cls) throw UnknownCategory(rec.category);
        rec.tag_class = *cls;
        if (!fields[1].empty() && fields[1] != to_string(rec.tag_class))
            throw MalformedRow(line_no, "class '" + fields[1] + "' does not match category '" +
                                            rec.category + "'");
        rec.label = fields[3];
        if (rec.label.empty()) throw MalformedRow(line_no, "empty label");
        rec.subtype = fields[4];
        if (!fields[5].empty()) rec.urls = split(fields[5], '|');
        if (fields[6].empty() || fields[6] == "trusted")
            rec.trust = SourceTrust::trusted;
        else if (fields[6] == "crowd")
            rec.trust = SourceTrust::crowd;
        else
            throw MalformedRow(line_no, "trust must be 'trusted' or 'crowd'");
        out[rec.address].push_back(rec);
    }
    return out;
}

TagMultimap import_tags(const std::string& path) {
    return import_tags_text(read_file(path));
}

namespace {

// Canonical record ordering makes disambiguation independent of row order.
bool record_less(const TagRecord& a, const TagRecord& b) {
    return std::tie(a.category, a.label, a.subtype, a.trust, a.urls) <
           std::tie(b.category, b.label, b.subtype, b.trust, b.urls);
}

// Within one (category,label) group: favor the record with more information.
TagRecord pick_informative(std::vector<TagRecord> group) {
    std::sort(group.begin(), group.end(), record_less);
    TagRecord best = group[0];
    for (const auto& rec : group) {
        if (rec.subtype.size() != best.subtype.size()) {
            if (rec.subtype.size() > best.subtype.size()) best = rec;
        } else if (rec.urls.size() > best.urls.size()) {
            best = rec;
        }
    }
    return best;
}

std::map<std::string, std::vector<TagRecord>> group_by_tag(const std::vector<TagRecord>& tags) {
    std::map<std::string, std::vector<TagRecord>> groups;
    for (const auto& rec : tags) groups[rec.tag()].push_back(rec);
    return groups;
}

}  // namespace

std::optional<ResolvedTag> disambiguate_address(const std::vector<TagRecord>& tags,
                                                std::string* reason) {
    auto groups = group_by_tag(tags);

    // Rule 2: with conflicting tags, crowd-sourced records are dropped first.
    if (groups.size() > 1) {
        std::vector<TagRecord> trusted;
        for (const auto& rec : tags)
            if (rec.trust == SourceTrust::trusted) trusted.push_back(rec);
        if (!trusted.empty() && trusted.size() != tags.size())
            groups = group_by_tag(trusted);
    }

    // Rule 1: one tag left; keep the most informative record.
    if (groups.size() == 1) {
        ResolvedTag out;
        out.owner = pick_informative(groups.begin()->second);
        return out;
    }

    // Rule 3: multiple mining tags merge their labels.
    bool all_mining = std::all_of(groups.begin(), groups.end(), [](const auto& g) {
        return g.second.front().category == "mining";
    });
    if (all_mining) {
        std::set<std::string> labels;
        for (const auto& [tag, group] : groups) labels.insert(group.front().label);
        ResolvedTag out;
        out.owner = pick_informative(groups.begin()->second);
        std::string merged;
        for (const auto& l : labels) {
            if (!merged.empty()) merged += ',';
            merged += l;
        }
        out.owner.label = merged;
        return out;
    }

    // Rule 4: exactly one service tag among non-service tags is a case of
    // double ownership: the service owns the key, the other entity benefits.
    std::vector<std::string> service_tags, other_tags;
    for (const auto& [tag, group] : groups) {
        if (is_service_category(group.front().category))
            service_tags.push_back(tag);
        else
            other_tags.push_back(tag);
    }
    if (service_tags.size() == 1 && other_tags.size() == 1) {
        ResolvedTag out;
        out.owner = pick_informative(groups.at(service_tags[0]));
        out.beneficiary = pick_informative(groups.at(other_tags[0]));
        return out;
    }

    if (reason) {
        *reason = service_tags.size() > 1 ? "multiple service tags"
                                          : "conflicting non-service tags";
    }
    return std::nullopt;
}

TagDatabase build_tag_database(const TagMultimap& raw, const TagDbConfig&) {
    TagDatabase db;
    for (const auto& [address, records] : raw) {
        std::string reason;
        if (auto resolved = disambiguate_address(records, &reason)) {
            resolved->provenance = TagProvenance::direct;
            db.direct_[address] = *resolved;
        } else {
            db.unresolved_.push_back({address, records, reason});
        }
    }
    return db;
}

TagDatabase propagate_to_clusters(const TagDatabase& db, const ClusterMap& clusters,
                                  const TagDbConfig& config) {
    TagDatabase out = db;
    out.propagated_ = true;
    out.cluster_.clear();

    // Group direct tags by the cluster of their address.
    std::map<uint64_t, std::vector<const ResolvedTag*>> per_cluster;
    for (const auto& [address, tag] : db.direct_)
        per_cluster[clusters.cluster_of(address)].push_back(&tag);

    for (const auto& [cluster_id, tags] : per_cluster) {
        std::map<std::string, const ResolvedTag*> distinct;
        for (const ResolvedTag* t : tags) distinct.emplace(t->owner.tag(), t);

        auto propagate = [&](ResolvedTag tag) {
            tag.provenance = TagProvenance::cluster_propagated;
            out.cluster_[cluster_id] = tag;
        };

        if (distinct.size() == 1) {
            propagate(*distinct.begin()->second);
            continue;
        }

        std::vector<const ResolvedTag*> service_tags, other_tags;
        for (const auto& [tag, t] : distinct) {
            if (is_service_category(t->owner.category))
                service_tags.push_back(t);
            else
                other_tags.push_back(t);
        }

        if (service_tags.size() > 1) {
            UnresolvedEntry e;
            e.key = "cluster:" + std::to_string(cluster_id);
            for (const auto& [tag, t] : distinct) e.records.push_back(t->owner);
            e.reason = "multiple service tags in cluster";
            out.unresolved_.push_back(std::move(e));
            continue;
        }

        if (service_tags.size() == 1) {
            ResolvedTag tag = *service_tags[0];
            if (other_tags.size() == 1 && !tag.beneficiary)
                tag.beneficiary = other_tags[0]->owner;
            propagate(tag);
            continue;
        }

        // No service tag: merge close labels as aliases of one entity.
        bool aliases = true;
        for (std::size_t i = 1; i < other_tags.size() && aliases; ++i) {
            const auto& a = other_tags[0]->owner;
            const auto& b = other_tags[i]->owner;
            if (a.category != b.category ||
                edit_distance(normalize_label(a.label), normalize_label(b.label)) >
                    config.alias_edit_distance)
                aliases = false;
        }
        if (aliases) {
            // Keep the longest label as the canonical alias.
            const ResolvedTag* best = other_tags[0];
            for (const ResolvedTag* t : other_tags)
                if (t->owner.label.size() > best->owner.label.size() ||
                    (t->owner.label.size() == best->owner.label.size() &&
                     t->owner.label < best->owner.label))
                    best = t;
            propagate(*best);
        } else {
            UnresolvedEntry e;
            e.key = "cluster:" + std::to_string(cluster_id);
            for (const auto& [tag, t] : distinct) e.records.push_back(t->owner);
            e.reason = "conflicting non-service tags in cluster";
            out.unresolved_.push_back(std::move(e));
        }
    }
    return out;
}

std::optional<ResolvedTag> TagDatabase::lookup(const std::string& address,
                                               const ClusterMap& clusters) const {
    auto it = direct_.find(address);
    if (it != direct_.end()) return it->second;
    if (!cluster_.empty()) {
        auto cit = cluster_.find(clusters.cluster_of(address));
        if (cit != cluster_.end()) return cit->second;
    }
    return std::nullopt;
}

namespace {

ordered_json record_json(const TagRecord& rec) {
    ordered_json j;
    j["address"] = rec.address;
    j["class"] = to_string(rec.tag_class);
    j["category"] = rec.category;
    j["label"] = rec.label;
    j["subtype"] = rec.subtype;
    j["urls"] = rec.urls;
    j["trust"] = rec.trust == SourceTrust::trusted ? "trusted" : "crowd";
    return j;
}

ordered_json resolved_json(const ResolvedTag& tag) {
    ordered_json j;
    j["owner"] = record_json(tag.owner);
    j["beneficiary"] = tag.beneficiary ? record_json(*tag.beneficiary) : ordered_json(nullptr);
    j["provenance"] =
        tag.provenance == TagProvenance::direct ? "direct" : "cluster-propagated";
    return j;
}

std::string csv_escape_urls(const std::vector<std::string>& urls) {
    std::string out;
    for (const auto& u : urls) {
        if (!out.empty()) out += '|';
        out += u;
    }
    return out;
}

}  // namespace

std::string TagDatabase::export_json() const {
    ordered_json j;
    j["format"] = "txtrace-tagdb";
    j["version"] = 1;
    j["propagated"] = propagated_;
    j["addresses"] = ordered_json::array();
    for (const auto& [address, tag] : direct_) {
        ordered_json entry = resolved_json(tag);
        entry["key"] = address;
        j["addresses"].push_back(entry);
    }
    j["clusters"] = ordered_json::array();
    for (const auto& [cluster_id, tag] : cluster_) {
        ordered_json entry = resolved_json(tag);
        entry["key"] = cluster_id;
        j["clusters"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

std::string TagDatabase::review_csv() const {
    std::string csv = "address,class,category,label,subtype,urls,trust,reason\n";
    for (const auto& entry : unresolved_) {
        for (const auto& rec : entry.records) {
            csv += entry.key + "," + to_string(rec.tag_class) + "," + rec.category + "," +
                   rec.label + "," + rec.subtype + "," + csv_escape_urls(rec.urls) + "," +
                   (rec.trust == SourceTrust::trusted ? "trusted" : "crowd") + "," +
                   entry.reason + "\n";
        }
    }
    return csv;
}

}  // namespace txtrace
