#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "txtrace/features.hpp"
#include "txtrace/rng.hpp"

namespace txtrace {

struct TreeParams {
    int max_depth = 40;
    int min_samples_leaf = 1;
    // 0 = consider every feature; forests use floor(sqrt(42)) = 6.
    int features_per_split = 0;
};

// Flat node array; node 0 is the root. Leaves store the positive-class
// probability in `prob` and have feature == -1.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double prob = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    bool degenerate = false;  // single-class training set

    double predict(const FeatureVector& x) const;
};

struct ForestParams {
    int n_trees = 600;
    int max_depth = 40;
    double prediction_threshold = 0.5;
    int features_per_split = 6;  // floor(sqrt(42))
    uint64_t rng_seed = 0;
};

struct RandomForest {
    std::vector<DecisionTree> trees;
    ForestParams params;
    NormalizationParams normalizer;

    bool trained() const { return !trees.empty(); }
    // Takes a raw (unnormalized) vector; normalization is part of the model.
    std::pair<double, bool> predict(const FeatureVector& raw) const;

    // Versioned, self-describing JSON; embeds the normalizer so prediction
    // needs no side files.
    std::string to_json() const;
    static RandomForest from_json(const std::string& text);
};

struct Sample {
    FeatureVector x;
    int label;  // 1 = exchange
};

DecisionTree train_tree(const std::vector<Sample>& train, const TreeParams& params, Rng& rng);
RandomForest train_forest(const std::vector<Sample>& train, const ForestParams& params,
                          const NormalizationParams& normalizer);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

Metrics evaluate(const RandomForest& model, const std::vector<Sample>& test);

struct CvResult {
    std::vector<Metrics> folds;
    Metrics mean;  // averaged P/R/F1, summed confusion counts
};

CvResult cross_validate(const std::vector<Sample>& data, int k, const ForestParams& params);

struct DatasetRow {
    std::string address;
    int label;
    bool test_split;
    std::string provenance;  // "seed" or "cluster:<seed>"
};

struct LabeledDataset {
    std::vector<DatasetRow> rows;
    std::vector<Sample> train;
    std::vector<Sample> test;
};

// Expands seed addresses through their MI clusters round-robin until the
// classes balance, extracts features, and makes a stratified 80/20 split.
LabeledDataset assemble_dataset(const ChainStore& store, const ClusterMap& clusters,
                                const std::vector<std::string>& positive_seeds,
                                const std::vector<std::string>& negative_seeds,
                                std::size_t target_size, uint64_t seed);

// threshold,tpr,fpr rows over the model's probability outputs.
std::string roc_csv(const RandomForest& model, const std::vector<Sample>& test);

}  // namespace txtrace
