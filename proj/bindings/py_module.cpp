#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "txtrace/errors.hpp"
#include "txtrace/evaluation.hpp"
#include "txtrace/manifest.hpp"
#include "txtrace/pipeline.hpp"
#include "txtrace/relations.hpp"
#include "txtrace/synth.hpp"
#include "txtrace/util.hpp"

namespace py = pybind11;
using namespace txtrace;

namespace {

py::dict resolved_tag_dict(const ResolvedTag& tag) {
    py::dict d;
    d["category"] = tag.owner.category;
    d["label"] = tag.owner.label;
    d["subtype"] = tag.owner.subtype;
    d["provenance"] =
        tag.provenance == TagProvenance::direct ? "direct" : "cluster-propagated";
    if (tag.beneficiary) {
        py::dict b;
        b["category"] = tag.beneficiary->category;
        b["label"] = tag.beneficiary->label;
        d["beneficiary"] = b;
    } else {
        d["beneficiary"] = py::none();
    }
    return d;
}

py::dict oracle_result_dict(const OracleResult& r) {
    py::dict d;
    d["is_signaling"] = r.is_signaling;
    py::list evidence;
    for (const auto& e : r.evidence) {
        py::dict ed;
        ed["payload"] = e.payload;
        ed["txid"] = e.txid;
        ed["timestamp"] = e.timestamp;
        evidence.append(ed);
    }
    d["evidence"] = evidence;
    if (r.ratio) d["ratio"] = *r.ratio;
    return d;
}

ExplorationConfig config_from_kwargs(const std::string& direction, bool sdd,
                                     std::optional<std::size_t> max_addresses,
                                     bool dust_filter, bool coinjoin_filter) {
    ExplorationConfig config;
    auto dir = direction_from_string(direction);
    if (!dir) throw Error("unknown direction '" + direction + "'");
    config.direction = *dir;
    config.sdd = sdd;
    config.max_addresses = max_addresses;
    config.dust_filter_enabled = dust_filter;
    config.coinjoin_filter_enabled = coinjoin_filter;
    return config;
}

}  // namespace

PYBIND11_MODULE(_txtrace, m) {
    m.doc() = "bitcoin transaction-graph forensics toolkit";

    py::register_exception<Error>(m, "TxtraceError");

    py::class_<ChainStore>(m, "ChainStore")
        .def_static("load", [](const std::string& path) { return ingest_chain(path); },
                    py::arg("path"))
        .def_static("from_text",
                    [](const std::string& text) { return ingest_chain_text(text); },
                    py::arg("text"))
        .def_property_readonly("tx_count",
                               [](const ChainStore& s) { return s.txs().size(); })
        .def_property_readonly("address_count", &ChainStore::address_count)
        .def("addresses", &ChainStore::sorted_addresses)
        .def("context",
             [](const ChainStore& s, const std::string& address) {
                 AddressRecord rec = s.context(address);
                 py::dict d;
                 py::list deposits, withdrawals;
                 for (uint32_t i : rec.deposit_txs) deposits.append(s.tx(i).txid);
                 for (uint32_t i : rec.withdrawal_txs) withdrawals.append(s.tx(i).txid);
                 d["deposits"] = deposits;
                 d["withdrawals"] = withdrawals;
                 d["type"] = to_string(rec.type);
                 d["equiv_count"] = rec.equiv_count;
                 return d;
             },
             py::arg("address"))
        .def("export_jsonl", &ChainStore::export_jsonl);

    py::class_<ClusterMap>(m, "ClusterMap")
        .def_static("build", &build_clusters, py::arg("store"))
        .def("cluster_of", &ClusterMap::cluster_of, py::arg("address"))
        .def("export_csv", &ClusterMap::export_csv);

    py::class_<TagDatabase>(m, "TagDatabase")
        .def_static(
            "load",
            [](const std::string& path, const ClusterMap& clusters, bool propagate) {
                return load_tag_database(path, clusters, propagate);
            },
            py::arg("path"), py::arg("clusters"), py::arg("propagate") = true)
        .def("lookup",
             [](const TagDatabase& db, const std::string& address,
                const ClusterMap& clusters) -> py::object {
                 auto tag = db.lookup(address, clusters);
                 if (!tag) return py::none();
                 return resolved_tag_dict(*tag);
             },
             py::arg("address"), py::arg("clusters"))
        .def("export_json", &TagDatabase::export_json);

    py::class_<RandomForest>(m, "RandomForest")
        .def_static("load",
                    [](const std::string& path) {
                        return RandomForest::from_json(read_file(path));
                    },
                    py::arg("path"))
        .def_static("from_json_text", &RandomForest::from_json, py::arg("text"))
        .def("predict",
             [](const RandomForest& model, const std::vector<double>& features) {
                 if (features.size() != kFeatureCount)
                     throw Error("expected 42 features");
                 FeatureVector x;
                 std::copy(features.begin(), features.end(), x.begin());
                 return model.predict(x);
             },
             py::arg("features"))
        .def("to_json", &RandomForest::to_json)
        .def_property_readonly("n_trees",
                               [](const RandomForest& m2) { return m2.trees.size(); });

    m.def("feature_names", [] {
        return std::vector<std::string>(feature_names().begin(), feature_names().end());
    });
    m.def(
        "extract_features",
        [](const ChainStore& store, const ClusterMap& clusters, const std::string& address) {
            FeatureVector f = extract_features(store, clusters, address);
            return std::vector<double>(f.begin(), f.end());
        },
        py::arg("store"), py::arg("clusters"), py::arg("address"));

    m.def(
        "train",
        [](const ChainStore& store, const ClusterMap& clusters,
           const std::vector<std::string>& positives, const std::vector<std::string>& negatives,
           int trees, int depth, uint64_t seed, std::size_t target_size) {
            ForestParams params;
            params.n_trees = trees;
            params.max_depth = depth;
            params.rng_seed = seed;
            TrainOutcome outcome =
                train_pipeline(store, clusters, positives, negatives, params, target_size);
            py::dict d;
            d["model"] = outcome.model;
            d["test_f1"] = outcome.test.f1;
            d["cv_mean_f1"] = outcome.cv.mean.f1;
            return d;
        },
        py::arg("store"), py::arg("clusters"), py::arg("positives"), py::arg("negatives"),
        py::arg("trees") = 600, py::arg("depth") = 40, py::arg("seed") = 0,
        py::arg("target_size") = 0);

    py::class_<ExplorationGraph>(m, "ExplorationGraph")
        .def_static("from_json", &ExplorationGraph::from_json, py::arg("text"))
        .def("to_json", &ExplorationGraph::to_json)
        .def("to_dot", &ExplorationGraph::to_dot)
        .def_property_readonly("address_count",
                               [](const ExplorationGraph& g) { return g.addresses.size(); })
        .def_property_readonly("tx_count",
                               [](const ExplorationGraph& g) { return g.txs.size(); })
        .def_property_readonly("edge_count",
                               [](const ExplorationGraph& g) { return g.edges.size(); })
        .def("node_kind",
             [](const ExplorationGraph& g, const std::string& id) -> py::object {
                 auto it = g.addresses.find(id);
                 if (it == g.addresses.end()) return py::none();
                 return py::str(to_string(it->second.kind));
             },
             py::arg("address"))
        .def("stats", [](const ExplorationGraph& g) {
            py::dict d;
            d["seeds"] = g.stats.seeds;
            d["seeds_online_wallet"] = g.stats.seeds_online_wallet;
            d["seeds_explored"] = g.stats.seeds_explored;
            d["components"] = g.stats.components;
            d["addresses"] = g.stats.addresses;
            d["txes"] = g.stats.txes;
            d["unexplored"] = g.stats.unexplored;
            d["tagged"] = g.stats.tagged;
            d["classifier_exchanges"] = g.stats.classifier_exchanges;
            d["limit_reached"] = g.stats.limit_reached;
            return d;
        });

    m.def(
        "explore",
        [](const ChainStore& store, const ClusterMap& clusters, const TagDatabase& tags,
           const std::vector<std::string>& seeds, py::object model, const std::string& direction,
           bool sdd, std::optional<std::size_t> max_addresses, bool dust_filter,
           bool coinjoin_filter, const std::vector<std::string>& exchange_list) {
            ExplorationConfig config = config_from_kwargs(direction, sdd, max_addresses,
                                                          dust_filter, coinjoin_filter);
            std::unique_ptr<ExchangeClassifier> classifier;
            if (!model.is_none()) {
                auto& forest = model.cast<RandomForest&>();
                classifier = std::make_unique<ForestClassifier>(&forest);
            } else if (!exchange_list.empty()) {
                classifier = std::make_unique<FixedSetClassifier>(
                    std::set<std::string>(exchange_list.begin(), exchange_list.end()));
            }
            config.classifier_enabled = classifier != nullptr;
            return explore(store, clusters, tags, classifier.get(), seeds, config);
        },
        py::arg("store"), py::arg("clusters"), py::arg("tags"), py::arg("seeds"),
        py::arg("model") = py::none(), py::arg("direction") = "back-and-forth",
        py::arg("sdd") = false, py::arg("max_addresses") = py::none(),
        py::arg("dust_filter") = true, py::arg("coinjoin_filter") = true,
        py::arg("exchange_list") = std::vector<std::string>{});

    m.def(
        "find_relations",
        [](const ExplorationGraph& graph, const TagDatabase& tags, const ClusterMap& clusters,
           const std::string& family) {
            RelationReport report = find_relations(graph, tags, clusters);
            py::dict d;
            py::list relations;
            for (const auto& rel : report.relations) {
                py::dict rd;
                rd["seed"] = rel.seed;
                rd["tag"] = rel.tag();
                rd["direction"] = rel.direction == RelationDirection::seed_to_entity
                                      ? "seed-to-entity"
                                      : "entity-to-seed";
                rd["discovery"] = rel.discovery == RelationDiscovery::exploration
                                      ? "exploration"
                                      : "mi-clustering-on-seeds";
                rd["path"] = rel.path;
                relations.append(rd);
            }
            d["relations"] = relations;
            d["summary_csv"] = report.summary_csv(family);
            d["evidence_json"] = report.evidence_json();
            return d;
        },
        py::arg("graph"), py::arg("tags"), py::arg("clusters"),
        py::arg("family") = "campaign");

    m.def(
        "apply_oracles",
        [](ExplorationGraph& graph, const ChainStore& store,
           const std::vector<std::string>& families, const std::string& glupteba_key_hex) {
            OracleRegistry registry;
            for (const auto& family : families) {
                if (family == "glupteba") {
                    GluptebaParams params;
                    params.keys = {hex_decode(glupteba_key_hex)};
                    registry.oracles[family] = [params](const ChainStore& s,
                                                        const std::string& a) {
                        return glupteba_oracle(s, a, params);
                    };
                } else {
                    registry.register_family(family, "");
                }
            }
            return apply_oracles(graph, registry, store);
        },
        py::arg("graph"), py::arg("store"), py::arg("families"),
        py::arg("glupteba_key_hex") = "");

    m.def("cerber_oracle",
          [](const ChainStore& s, const std::string& a) {
              return oracle_result_dict(cerber_oracle(s, a));
          },
          py::arg("store"), py::arg("address"));
    m.def("pony_oracle",
          [](const ChainStore& s, const std::string& a) {
              return oracle_result_dict(pony_oracle(s, a));
          },
          py::arg("store"), py::arg("address"));
    m.def("glupteba_oracle",
          [](const ChainStore& s, const std::string& a, const std::string& key_hex) {
              GluptebaParams params;
              params.keys = {hex_decode(key_hex)};
              return oracle_result_dict(glupteba_oracle(s, a, params));
          },
          py::arg("store"), py::arg("address"), py::arg("key_hex"));

    m.def("detect_coinjoin",
          [](const ChainStore& s, const std::string& txid) {
              auto idx = s.tx_index(txid);
              if (!idx) throw Error("unknown txid " + txid);
              return detect_coinjoin(s.tx(*idx));
          },
          py::arg("store"), py::arg("txid"));
    m.def("detect_dust",
          [](const ChainStore& s, const std::string& txid) {
              auto idx = s.tx_index(txid);
              if (!idx) throw Error("unknown txid " + txid);
              return detect_dust(s.tx(*idx));
          },
          py::arg("store"), py::arg("txid"));

    m.def(
        "generate_chain",
        [](const std::string& spec_json, uint64_t seed) {
            SynthSpec spec;
            if (!spec_json.empty()) spec = SynthSpec::from_json(spec_json);
            spec.rng_seed = seed;
            SynthResult result = generate_chain(spec);
            py::dict d;
            d["chain_jsonl"] = result.chain_jsonl;
            d["manifest_json"] = result.manifest_json;
            d["tags_csv"] = result.tags_csv;
            d["seeds_txt"] = result.seeds_txt;
            return d;
        },
        py::arg("spec_json") = "", py::arg("seed") = 1);

    m.attr("__version__") = kToolVersion;
}
