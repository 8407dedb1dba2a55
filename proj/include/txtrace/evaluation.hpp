#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "txtrace/explorer.hpp"
#include "txtrace/relations.hpp"

namespace txtrace {

enum class InjectMode { inject_cfp, inject_cfn };

const char* to_string(InjectMode m);

// Wraps the real classifier and flips decisions of one polarity with
// probability epsilon; the other polarity is never touched.
struct ErrorInjectingClassifier : ExchangeClassifier {
    ExchangeClassifier* inner;
    InjectMode mode;
    double epsilon;
    Rng rng;
    std::size_t decisions = 0;
    std::size_t flips = 0;
    std::size_t eligible = 0;

    ErrorInjectingClassifier(ExchangeClassifier* c, InjectMode m, double eps, uint64_t seed)
        : inner(c), mode(m), epsilon(eps), rng(seed) {}

    bool is_exchange(const std::string& address, const FeatureVector& f) override {
        bool verdict = inner->is_exchange(address, f);
        ++decisions;
        bool target = mode == InjectMode::inject_cfp ? !verdict : verdict;
        if (target) {
            ++eligible;
            if (rng.chance(epsilon)) {
                ++flips;
                verdict = !verdict;
            }
        }
        return verdict;
    }
};

// (seed cluster, tag, direction) triples; the unit of relation-level F1.
std::set<std::string> relation_triples(const RelationReport& report);

struct EpsilonPoint {
    double epsilon;
    InjectMode mode;
    double mean_f1;
    double std_f1;
};

struct EpsilonStudyInputs {
    const ChainStore& store;
    const ClusterMap& clusters;
    const TagDatabase& tagdb;
    ExchangeClassifier& classifier;
    const std::vector<std::string>& seeds;
    ExplorationConfig config;
};

std::vector<EpsilonPoint> run_epsilon_study(const EpsilonStudyInputs& in,
                                            const std::vector<double>& epsilons,
                                            std::size_t repeats, uint64_t base_seed);

// "epsilon,mode,mean_f1,std_f1" rows.
std::string epsilon_csv(const std::vector<EpsilonPoint>& points);

struct AblationRun {
    double runtime_seconds = 0;
    std::size_t addresses = 0;
    std::size_t txes = 0;
    bool limit_reached = false;
};

struct AblationResult {
    AblationRun with_classifier;
    AblationRun without_classifier;
};

AblationResult run_ablation(const ChainStore& store, const ClusterMap& clusters,
                            const TagDatabase& tagdb, ExchangeClassifier& classifier,
                            const std::vector<std::string>& seeds,
                            const ExplorationConfig& config, std::size_t limit);

std::string ablation_json(const AblationResult& result);

struct DirectionComparison {
    std::size_t nodes_back_and_forth = 0;
    std::size_t nodes_forward_only = 0;
    std::size_t edges_back_and_forth = 0;
    std::size_t edges_forward_only = 0;
    double node_ratio = 0;  // forward / back-and-forth
    double edge_ratio = 0;
    ReportDiff relation_diff;  // removed = relations only in back-and-forth
};

DirectionComparison compare_directions(const ChainStore& store, const ClusterMap& clusters,
                                       const TagDatabase& tagdb,
                                       ExchangeClassifier* classifier,
                                       const std::vector<std::string>& seeds,
                                       const ExplorationConfig& config);

std::string directions_json(const DirectionComparison& result);

}  // namespace txtrace
