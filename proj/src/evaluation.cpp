#include "txtrace/evaluation.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>

#include "txtrace/errors.hpp"

namespace txtrace {

using nlohmann::ordered_json;

const char* to_string(InjectMode m) {
    return m == InjectMode::inject_cfp ? "inject_cfp" : "inject_cfn";
}

std::set<std::string> relation_triples(const RelationReport& report) {
    std::set<std::string> out;
    for (const auto& rel : report.relations)
        out.insert(std::to_string(rel.seed_cluster) + "|" + rel.tag() + "|" +
                   (rel.direction == RelationDirection::seed_to_entity ? ">" : "<"));
    return out;
}

namespace {

double relation_f1(const std::set<std::string>& baseline, const std::set<std::string>& run) {
    std::size_t tp = 0;
    for (const auto& t : run)
        if (baseline.count(t)) ++tp;
    std::size_t fp = run.size() - tp;
    std::size_t fn = baseline.size() - tp;
    if (2 * tp + fp + fn == 0) return 1.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace

std::vector<EpsilonPoint> run_epsilon_study(const EpsilonStudyInputs& in,
                                            const std::vector<double>& epsilons,
                                            std::size_t repeats, uint64_t base_seed) {
    ExplorationGraph baseline_graph = explore(in.store, in.clusters, in.tagdb,
                                              &in.classifier, in.seeds, in.config);
    RelationReport baseline = find_relations(baseline_graph, in.tagdb, in.clusters);
    std::set<std::string> baseline_triples = relation_triples(baseline);

    std::vector<EpsilonPoint> points;
    for (InjectMode mode : {InjectMode::inject_cfp, InjectMode::inject_cfn}) {
        for (double eps : epsilons) {
            std::vector<double> f1s;
            for (std::size_t r = 0; r < repeats; ++r) {
                uint64_t run_seed = base_seed ^ (static_cast<uint64_t>(mode) << 32) ^
                                    (static_cast<uint64_t>(eps * 1000) << 8) ^ r;
                ErrorInjectingClassifier injected(&in.classifier, mode, eps, run_seed);
                ExplorationGraph graph = explore(in.store, in.clusters, in.tagdb, &injected,
                                                 in.seeds, in.config);
                RelationReport report = find_relations(graph, in.tagdb, in.clusters);
                f1s.push_back(relation_f1(baseline_triples, relation_triples(report)));
            }
            double mean = 0;
            for (double v : f1s) mean += v;
            mean /= static_cast<double>(f1s.size());
            double var = 0;
            for (double v : f1s) var += (v - mean) * (v - mean);
            var /= static_cast<double>(f1s.size());
            points.push_back({eps, mode, mean, std::sqrt(var)});
        }
    }
    return points;
}

std::string epsilon_csv(const std::vector<EpsilonPoint>& points) {
    std::string csv = "epsilon,mode,mean_f1,std_f1\n";
    for (const auto& p : points) {
        csv += nlohmann::json(p.epsilon).dump();
        csv += ",";
        csv += to_string(p.mode);
        csv += ",";
        csv += nlohmann::json(p.mean_f1).dump();
        csv += ",";
        csv += nlohmann::json(p.std_f1).dump();
        csv += "\n";
    }
    return csv;
}

AblationResult run_ablation(const ChainStore& store, const ClusterMap& clusters,
                            const TagDatabase& tagdb, ExchangeClassifier& classifier,
                            const std::vector<std::string>& seeds,
                            const ExplorationConfig& config, std::size_t limit) {
    AblationResult result;
    {
        ExplorationConfig with = config;
        with.classifier_enabled = true;
        auto t0 = std::chrono::steady_clock::now();
        ExplorationGraph g = explore(store, clusters, tagdb, &classifier, seeds, with);
        result.with_classifier.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.with_classifier.addresses = g.stats.addresses;
        result.with_classifier.txes = g.stats.txes;
        result.with_classifier.limit_reached = g.stats.limit_reached;
    }
    {
        ExplorationConfig without = config;
        without.classifier_enabled = false;
        without.max_addresses = limit;
        auto t0 = std::chrono::steady_clock::now();
        ExplorationGraph g = explore(store, clusters, tagdb, nullptr, seeds, without);
        result.without_classifier.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.without_classifier.addresses = g.stats.addresses;
        result.without_classifier.txes = g.stats.txes;
        result.without_classifier.limit_reached = g.stats.limit_reached;
    }
    return result;
}

std::string ablation_json(const AblationResult& result) {
    auto run_json = [](const AblationRun& r) {
        ordered_json j;
        j["runtime_seconds"] = r.runtime_seconds;
        j["addresses"] = r.addresses;
        j["txes"] = r.txes;
        j["limit_reached"] = r.limit_reached;
        return j;
    };
    ordered_json j;
    j["format"] = "txtrace-ablation";
    j["version"] = 1;
    j["with_classifier"] = run_json(result.with_classifier);
    j["without_classifier"] = run_json(result.without_classifier);
    auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
    j["increase"]["addresses_x"] =
        ratio(static_cast<double>(result.without_classifier.addresses),
              static_cast<double>(result.with_classifier.addresses));
    j["increase"]["txes_x"] = ratio(static_cast<double>(result.without_classifier.txes),
                                    static_cast<double>(result.with_classifier.txes));
    j["increase"]["runtime_x"] = ratio(result.without_classifier.runtime_seconds,
                                       result.with_classifier.runtime_seconds);
    return j.dump(2) + "\n";
}

DirectionComparison compare_directions(const ChainStore& store, const ClusterMap& clusters,
                                       const TagDatabase& tagdb,
                                       ExchangeClassifier* classifier,
                                       const std::vector<std::string>& seeds,
                                       const ExplorationConfig& config) {
    ExplorationConfig bf = config;
    bf.direction = Direction::back_and_forth;
    ExplorationConfig fwd = config;
    fwd.direction = Direction::forward_only;

    ExplorationGraph g_bf = explore(store, clusters, tagdb, classifier, seeds, bf);
    ExplorationGraph g_fwd = explore(store, clusters, tagdb, classifier, seeds, fwd);
    RelationReport r_bf = find_relations(g_bf, tagdb, clusters);
    RelationReport r_fwd = find_relations(g_fwd, tagdb, clusters);

    DirectionComparison cmp;
    cmp.nodes_back_and_forth = g_bf.addresses.size() + g_bf.txs.size();
    cmp.nodes_forward_only = g_fwd.addresses.size() + g_fwd.txs.size();
    cmp.edges_back_and_forth = g_bf.edges.size();
    cmp.edges_forward_only = g_fwd.edges.size();
    cmp.node_ratio = cmp.nodes_back_and_forth
                         ? static_cast<double>(cmp.nodes_forward_only) /
                               static_cast<double>(cmp.nodes_back_and_forth)
                         : 0.0;
    cmp.edge_ratio = cmp.edges_back_and_forth
                         ? static_cast<double>(cmp.edges_forward_only) /
                               static_cast<double>(cmp.edges_back_and_forth)
                         : 0.0;
    cmp.relation_diff = diff_reports(r_bf, r_fwd);
    return cmp;
}

std::string directions_json(const DirectionComparison& result) {
    ordered_json j;
    j["format"] = "txtrace-directions";
    j["version"] = 1;
    j["nodes"]["back_and_forth"] = result.nodes_back_and_forth;
    j["nodes"]["forward_only"] = result.nodes_forward_only;
    j["nodes"]["ratio"] = result.node_ratio;
    j["edges"]["back_and_forth"] = result.edges_back_and_forth;
    j["edges"]["forward_only"] = result.edges_forward_only;
    j["edges"]["ratio"] = result.edge_ratio;
    j["relations_only_forward"] = result.relation_diff.added;
    j["relations_only_back_and_forth"] = result.relation_diff.removed;
    return j.dump(2) + "\n";
}

}  // namespace txtrace
