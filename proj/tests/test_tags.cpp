#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "txtrace/errors.hpp"
#include "txtrace/rng.hpp"
#include "txtrace/tags.hpp"
#include "txtrace/util.hpp"

using namespace txtrace;
using txtest::ChainBuilder;

namespace {

TagRecord rec(const std::string& addr, const std::string& category, const std::string& label,
              const std::string& subtype = "", SourceTrust trust = SourceTrust::trusted) {
    TagRecord r;
    r.address = addr;
    r.category = category;
    r.tag_class = *category_class(category);
    r.label = label;
    r.subtype = subtype;
    r.trust = trust;
    return r;
}

}  // namespace

TEST_CASE("import parses the 6-tuple rows") {
    std::string csv =
        "address,class,category,label,subtype,urls,trust\n"
        "1NDyJt,service,exchange,binance,hot wallet,https://walletexplorer.example/1,trusted\n";
    TagMultimap raw = import_tags_text(csv);
    REQUIRE(raw.count("1NDyJt") == 1);
    const TagRecord& r = raw["1NDyJt"][0];
    CHECK(r.category == "exchange");
    CHECK(r.label == "binance");
    CHECK(r.subtype == "hot wallet");
    CHECK(r.urls.size() == 1);
    CHECK(r.tag_class == TagClass::service);
}

TEST_CASE("empty file yields an empty multimap") {
    CHECK(import_tags_text("address,class,category,label,subtype,urls,trust\n").empty());
    CHECK(import_tags_text("").empty());
}

TEST_CASE("unknown category is rejected") {
    std::string csv = "a,service,exchnage,binance,,,trusted\n";
    CHECK_THROWS_AS(import_tags_text(csv), UnknownCategory);
}

TEST_CASE("class column must match the category") {
    std::string csv = "a,malware,exchange,binance,,,trusted\n";
    CHECK_THROWS_AS(import_tags_text(csv), MalformedRow);
}

TEST_CASE("double ownership: service owner, malware beneficiary") {
    auto resolved = disambiguate_address({rec("x", "exchange", "binance"),
                                          rec("x", "clipper", "masad")});
    REQUIRE(resolved.has_value());
    CHECK(resolved->owner.tag() == "exchange:binance");
    REQUIRE(resolved->beneficiary.has_value());
    CHECK(resolved->beneficiary->tag() == "clipper:masad");
}

TEST_CASE("mining tags merge labels") {
    auto resolved = disambiguate_address({rec("x", "mining", "deepbit"),
                                          rec("x", "mining", "eobot")});
    REQUIRE(resolved.has_value());
    CHECK(resolved->owner.label == "deepbit,eobot");
    CHECK_FALSE(resolved->beneficiary.has_value());
}

TEST_CASE("same tag: the subtyped record wins") {
    auto resolved = disambiguate_address({rec("x", "exchange", "binance", "hot"),
                                          rec("x", "exchange", "binance")});
    REQUIRE(resolved.has_value());
    CHECK(resolved->owner.subtype == "hot");
}

TEST_CASE("crowd-sourced records are dropped on conflicts") {
    auto resolved = disambiguate_address(
        {rec("x", "ransomware", "locky"),
         rec("x", "miscabuse", "spam", "", SourceTrust::crowd)});
    REQUIRE(resolved.has_value());
    CHECK(resolved->owner.tag() == "ransomware:locky");
}

TEST_CASE("conflicting non-service tags are unresolvable") {
    std::string reason;
    auto resolved = disambiguate_address(
        {rec("x", "ransomware", "locky"), rec("x", "clipper", "masad")}, &reason);
    CHECK_FALSE(resolved.has_value());
    CHECK(reason == "conflicting non-service tags");
}

TEST_CASE("disambiguation ignores input row order") {
    std::vector<TagRecord> tags = {rec("x", "exchange", "binance", "hot"),
                                   rec("x", "clipper", "masad"),
                                   rec("x", "exchange", "binance")};
    Rng rng(3);
    auto first = disambiguate_address(tags);
    for (int i = 0; i < 10; ++i) {
        rng.shuffle(tags);
        auto again = disambiguate_address(tags);
        REQUIRE(again.has_value());
        CHECK(again->owner.tag() == first->owner.tag());
        CHECK(again->owner.subtype == first->owner.subtype);
        CHECK(again->beneficiary->tag() == first->beneficiary->tag());
    }
}

TEST_CASE("cluster propagation") {
    ChainBuilder b;
    b.add({}, {{"A", 1000000000}});
    b.add({}, {{"B", 1000000000}});
    b.add({}, {{"C", 1000000000}});
    b.add({{"A", 1000000}, {"B", 1000000}, {"C", 1000000}}, {{"sink", 2900000}});
    ChainStore store = b.store();
    ClusterMap clusters = build_clusters(store);

    SUBCASE("single tag reaches the whole cluster") {
        TagMultimap raw;
        raw["A"].push_back(rec("A", "ransomware", "locky"));
        TagDatabase db = propagate_to_clusters(build_tag_database(raw), clusters);
        auto tag_b = db.lookup("B", clusters);
        REQUIRE(tag_b.has_value());
        CHECK(tag_b->owner.tag() == "ransomware:locky");
        CHECK(tag_b->provenance == TagProvenance::cluster_propagated);
        // direct tags stay direct
        CHECK(db.lookup("A", clusters)->provenance == TagProvenance::direct);
        // outside the cluster nothing is tagged
        CHECK_FALSE(db.lookup("sink", clusters).has_value());
    }

    SUBCASE("close labels merge as aliases") {
        TagMultimap raw;
        raw["A"].push_back(rec("A", "username", "Metabank.ru"));
        raw["B"].push_back(rec("B", "username", "Metabank"));
        TagDatabase db = propagate_to_clusters(build_tag_database(raw), clusters);
        auto tag_c = db.lookup("C", clusters);
        REQUIRE(tag_c.has_value());
        CHECK(tag_c->owner.label == "Metabank.ru");
    }

    SUBCASE("two service tags block propagation") {
        TagMultimap raw;
        raw["A"].push_back(rec("A", "exchange", "binance"));
        raw["B"].push_back(rec("B", "exchange", "kraken"));
        TagDatabase db = propagate_to_clusters(build_tag_database(raw), clusters);
        CHECK_FALSE(db.lookup("C", clusters).has_value());
        CHECK(db.unresolved().size() == 1);
        CHECK(db.review_csv().rfind("address,class,category,label,subtype,urls,trust,reason\n", 0) == 0);
        CHECK(db.review_csv().find("multiple service tags") != std::string::npos);
    }

    SUBCASE("one service tag among others becomes the cluster owner") {
        TagMultimap raw;
        raw["A"].push_back(rec("A", "onlinewallet", "luno.com"));
        raw["B"].push_back(rec("B", "clipper", "androidclipper"));
        TagDatabase db = propagate_to_clusters(build_tag_database(raw), clusters);
        auto tag_c = db.lookup("C", clusters);
        REQUIRE(tag_c.has_value());
        CHECK(tag_c->owner.tag() == "onlinewallet:luno.com");
        REQUIRE(tag_c->beneficiary.has_value());
        CHECK(tag_c->beneficiary->tag() == "clipper:androidclipper");
    }
}

TEST_CASE("exploration stop categories") {
    ResolvedTag poloniex;
    poloniex.owner = rec("c", "exchange", "poloniex");
    CHECK(is_exploration_stop(poloniex));

    ResolvedTag clipper;
    clipper.owner = rec("x", "clipper", "masad");
    CHECK_FALSE(is_exploration_stop(clipper));

    // online wallet owning a clipper beneficiary is still a service stop
    ResolvedTag wallet;
    wallet.owner = rec("x", "onlinewallet", "luno.com");
    wallet.beneficiary = rec("x", "clipper", "androidclipper");
    CHECK(is_exploration_stop(wallet));

    for (const char* cat : {"exchange", "onlinewallet", "mixer", "tormarket", "gambling",
                            "payment", "mining", "service", "defi"})
        CHECK(is_service_category(cat));
    CHECK_FALSE(is_service_category("ransomware"));
}

TEST_CASE("at most one resolved tag per address") {
    std::string csv =
        "address,class,category,label,subtype,urls,trust\n"
        "a,service,exchange,binance,,,trusted\n"
        "a,service,exchange,binance,hot,,trusted\n"
        "b,malware,clipper,masad,,,trusted\n";
    TagDatabase db = build_tag_database(import_tags_text(csv));
    CHECK(db.direct().size() == 2);
    CHECK(db.direct().count("a") == 1);
}

TEST_CASE("tag database export is canonical") {
    std::string csv =
        "address,class,category,label,subtype,urls,trust\n"
        "a,service,exchange,binance,,,trusted\n";
    TagDatabase db = build_tag_database(import_tags_text(csv));
    CHECK(db.export_json() == build_tag_database(import_tags_text(csv)).export_json());
    CHECK(db.export_json().find("\"txtrace-tagdb\"") != std::string::npos);
}
