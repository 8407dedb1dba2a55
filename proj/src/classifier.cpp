#include "txtrace/classifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "txtrace/errors.hpp"

namespace txtrace {

using nlohmann::ordered_json;

double DecisionTree::predict(const FeatureVector& x) const {
    int idx = 0;
    while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
        idx = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(idx)].prob;
}

namespace {

struct Builder {
    const std::vector<Sample>& data;
    const TreeParams& params;
    Rng& rng;
    std::vector<TreeNode> nodes;

    double leaf_prob(const std::vector<std::size_t>& idx) const {
        std::size_t pos = 0;
        for (std::size_t i : idx) pos += static_cast<std::size_t>(data[i].label);
        return static_cast<double>(pos) / static_cast<double>(idx.size());
    }

    // Greedy Gini-minimizing split over the candidate features; midpoint
    // thresholds between sorted distinct values, first-best tie-break.
    bool best_split(const std::vector<std::size_t>& idx, int& best_feature,
                    double& best_threshold) const {
        const double n = static_cast<double>(idx.size());
        double best_impurity = std::numeric_limits<double>::infinity();
        best_feature = -1;

        std::vector<int> candidates;
        if (params.features_per_split > 0 &&
            params.features_per_split < static_cast<int>(kFeatureCount)) {
            std::set<int> chosen;
            while (static_cast<int>(chosen.size()) < params.features_per_split)
                chosen.insert(static_cast<int>(rng.below(kFeatureCount)));
            candidates.assign(chosen.begin(), chosen.end());
        } else {
            candidates.resize(kFeatureCount);
            std::iota(candidates.begin(), candidates.end(), 0);
        }

        std::vector<std::pair<double, int>> column(idx.size());
        for (int feat : candidates) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                column[i] = {data[idx[i]].x[static_cast<std::size_t>(feat)],
                             data[idx[i]].label};
            std::sort(column.begin(), column.end());

            double left_pos = 0, left_n = 0;
            double total_pos = 0;
            for (const auto& [v, y] : column) total_pos += y;

            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                left_pos += column[i].second;
                left_n += 1;
                if (column[i].first == column[i + 1].first) continue;
                double right_n = n - left_n;
                if (left_n < params.min_samples_leaf || right_n < params.min_samples_leaf)
                    continue;
                double right_pos = total_pos - left_pos;
                double pl = left_pos / left_n;
                double pr = right_pos / right_n;
                double gini =
                    left_n / n * 2 * pl * (1 - pl) + right_n / n * 2 * pr * (1 - pr);
                if (gini < best_impurity) {
                    best_impurity = gini;
                    best_feature = feat;
                    best_threshold = (column[i].first + column[i + 1].first) / 2.0;
                }
            }
        }
        if (best_feature < 0) return false;

        // Only keep splits that actually reduce impurity.
        double pos = 0;
        for (std::size_t i : idx) pos += data[i].label;
        double p = pos / n;
        return best_impurity < 2 * p * (1 - p);
    }

    int build(std::vector<std::size_t> idx, int depth) {
        int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        double prob = leaf_prob(idx);
        if (depth >= params.max_depth || prob == 0.0 || prob == 1.0 ||
            idx.size() < 2 * static_cast<std::size_t>(params.min_samples_leaf)) {
            nodes[static_cast<std::size_t>(node_id)].prob = prob;
            return node_id;
        }
        int feature = -1;
        double threshold = 0;
        if (!best_split(idx, feature, threshold)) {
            nodes[static_cast<std::size_t>(node_id)].prob = prob;
            return node_id;
        }
        std::vector<std::size_t> left, right;
        for (std::size_t i : idx)
            (data[i].x[static_cast<std::size_t>(feature)] <= threshold ? left : right)
                .push_back(i);
        if (left.empty() || right.empty()) {
            nodes[static_cast<std::size_t>(node_id)].prob = prob;
            return node_id;
        }
        int l = build(std::move(left), depth + 1);
        int r = build(std::move(right), depth + 1);
        TreeNode& node = nodes[static_cast<std::size_t>(node_id)];
        node.feature = feature;
        node.threshold = threshold;
        node.left = l;
        node.right = r;
        return node_id;
    }
};

}  // namespace

DecisionTree train_tree(const std::vector<Sample>& train, const TreeParams& params, Rng& rng) {
    if (train.size() < 2) throw InsufficientData("tree training needs at least 2 samples");
    DecisionTree tree;
    bool has_pos = false, has_neg = false;
    for (const auto& s : train) (s.label ? has_pos : has_neg) = true;
    tree.degenerate = !(has_pos && has_neg);

    Builder b{train, params, rng, {}};
    std::vector<std::size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    b.build(std::move(idx), 0);
    tree.nodes = std::move(b.nodes);
    return tree;
}

RandomForest train_forest(const std::vector<Sample>& train, const ForestParams& params,
                          const NormalizationParams& normalizer) {
    if (train.size() < 2) throw InsufficientData("forest training needs at least 2 samples");
    RandomForest forest;
    forest.params = params;
    forest.normalizer = normalizer;

    std::vector<Sample> normalized(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        normalized[i] = {normalizer.transform(train[i].x), train[i].label};

    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.features_per_split = params.features_per_split;

    Rng master(params.rng_seed);
    for (int t = 0; t < params.n_trees; ++t) {
        Rng tree_rng = master.child(static_cast<uint64_t>(t) + 1);
        std::vector<Sample> bootstrap(normalized.size());
        for (std::size_t i = 0; i < normalized.size(); ++i)
            bootstrap[i] = normalized[tree_rng.below(normalized.size())];
        forest.trees.push_back(train_tree(bootstrap, tp, tree_rng));
    }
    return forest;
}

std::pair<double, bool> RandomForest::predict(const FeatureVector& raw) const {
    if (trees.empty()) throw ModelUntrained();
    FeatureVector x = normalizer.transform(raw);
    double sum = 0;
    for (const auto& tree : trees) sum += tree.predict(x);
    double prob = sum / static_cast<double>(trees.size());
    return {prob, prob >= params.prediction_threshold};
}

std::string RandomForest::to_json() const {
    ordered_json j;
    j["format"] = "txtrace-model";
    j["version"] = 1;
    j["model"] = "random_forest";
    j["params"]["n_trees"] = params.n_trees;
    j["params"]["max_depth"] = params.max_depth;
    j["params"]["prediction_threshold"] = params.prediction_threshold;
    j["params"]["features_per_split"] = params.features_per_split;
    j["params"]["rng_seed"] = params.rng_seed;
    j["features"] = feature_names();
    j["normalizer"]["mean"] = normalizer.mean;
    j["normalizer"]["stddev"] = normalizer.stddev;
    j["trees"] = ordered_json::array();
    for (const auto& tree : trees) {
        ordered_json tj;
        tj["degenerate"] = tree.degenerate;
        tj["nodes"] = ordered_json::array();
        for (const auto& n : tree.nodes)
            tj["nodes"].push_back({n.feature, n.threshold, n.left, n.right, n.prob});
        j["trees"].push_back(tj);
    }
    return j.dump() + "\n";
}

RandomForest RandomForest::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid model file: ") + e.what());
    }
    if (j.value("format", "") != "txtrace-model")
        throw Error("not a txtrace model file");
    RandomForest forest;
    forest.params.n_trees = j["params"]["n_trees"].get<int>();
    forest.params.max_depth = j["params"]["max_depth"].get<int>();
    forest.params.prediction_threshold = j["params"]["prediction_threshold"].get<double>();
    forest.params.features_per_split = j["params"]["features_per_split"].get<int>();
    forest.params.rng_seed = j["params"]["rng_seed"].get<uint64_t>();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        forest.normalizer.mean[i] = j["normalizer"]["mean"][i].get<double>();
        forest.normalizer.stddev[i] = j["normalizer"]["stddev"][i].get<double>();
    }
    for (const auto& tj : j["trees"]) {
        DecisionTree tree;
        tree.degenerate = tj["degenerate"].get<bool>();
        for (const auto& nj : tj["nodes"]) {
            TreeNode n;
            n.feature = nj[0].get<int>();
            n.threshold = nj[1].get<double>();
            n.left = nj[2].get<int>();
            n.right = nj[3].get<int>();
            n.prob = nj[4].get<double>();
            tree.nodes.push_back(n);
        }
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

namespace {

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

}  // namespace

Metrics evaluate(const RandomForest& model, const std::vector<Sample>& test) {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& s : test) {
        bool pred = model.predict(s.x).second;
        if (pred && s.label)
            ++tp;
        else if (pred && !s.label)
            ++fp;
        else if (!pred && !s.label)
            ++tn;
        else
            ++fn;
    }
    return metrics_from_counts(tp, fp, tn, fn);
}

CvResult cross_validate(const std::vector<Sample>& data, int k, const ForestParams& params) {
    if (k < 2) throw InsufficientData("cross-validation needs k >= 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.size(); ++i) (data[i].label ? pos : neg).push_back(i);
    if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k))
        throw InsufficientData("each class needs at least k samples");

    Rng rng(params.rng_seed ^ 0x5f4be1u);
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<int> fold_of(data.size());
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = static_cast<int>(i % k);
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = static_cast<int>(i % k);

    CvResult result;
    double psum = 0, rsum = 0, fsum = 0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<Sample> train, test;
        for (std::size_t i = 0; i < data.size(); ++i)
            (fold_of[i] == fold ? test : train).push_back(data[i]);
        NormalizationParams norm;
        {
            std::vector<FeatureVector> rows;
            rows.reserve(train.size());
            for (const auto& s : train) rows.push_back(s.x);
            norm = fit_normalizer(rows);
        }
        ForestParams fp_params = params;
        fp_params.rng_seed = params.rng_seed + static_cast<uint64_t>(fold) + 1;
        RandomForest model = train_forest(train, fp_params, norm);
        Metrics m = evaluate(model, test);
        psum += m.precision;
        rsum += m.recall;
        fsum += m.f1;
        tp += m.tp;
        fp += m.fp;
        tn += m.tn;
        fn += m.fn;
        result.folds.push_back(m);
    }
    result.mean = metrics_from_counts(tp, fp, tn, fn);
    result.mean.precision = psum / k;
    result.mean.recall = rsum / k;
    result.mean.f1 = fsum / k;
    return result;
}

LabeledDataset assemble_dataset(const ChainStore& store, const ClusterMap& clusters,
                                const std::vector<std::string>& positive_seeds,
                                const std::vector<std::string>& negative_seeds,
                                std::size_t target_size, uint64_t seed) {
    if (positive_seeds.empty() || negative_seeds.empty())
        throw InsufficientData("both seed lists must be non-empty");
    {
        std::set<std::string> pos_set(positive_seeds.begin(), positive_seeds.end());
        for (const auto& a : negative_seeds)
            if (pos_set.count(a))
                throw Error("address " + a + " appears in both seed lists");
    }

    auto members_of = clusters.members();
    auto expand = [&](const std::vector<std::string>& seeds) {
        // Seeds first, then one cluster member per seed per round.
        std::vector<std::pair<std::string, std::string>> picked;  // (address, provenance)
        std::set<std::string> used;
        for (const auto& s : seeds)
            if (used.insert(s).second) picked.emplace_back(s, "seed");
        std::vector<std::pair<std::string, std::vector<std::string>>> pools;
        for (const auto& s : seeds) {
            auto it = members_of.find(clusters.cluster_of(s));
            if (it != members_of.end()) pools.emplace_back(s, it->second);
        }
        bool advanced = true;
        std::vector<std::size_t> cursor(pools.size(), 0);
        while (advanced) {
            advanced = false;
            for (std::size_t p = 0; p < pools.size(); ++p) {
                auto& [seed_addr, pool] = pools[p];
                while (cursor[p] < pool.size() && used.count(pool[cursor[p]])) ++cursor[p];
                if (cursor[p] < pool.size()) {
                    used.insert(pool[cursor[p]]);
                    picked.emplace_back(pool[cursor[p]], "cluster:" + seed_addr);
                    ++cursor[p];
                    advanced = true;
                }
            }
        }
        return picked;
    };

    auto pos_pool = expand(positive_seeds);
    auto neg_pool = expand(negative_seeds);
    std::size_t per_class = std::min(pos_pool.size(), neg_pool.size());
    if (target_size > 0) per_class = std::min(per_class, target_size / 2);
    if (per_class == 0) throw InsufficientData("cluster expansion cannot balance the classes");

    LabeledDataset ds;
    auto add_rows = [&](const std::vector<std::pair<std::string, std::string>>& pool,
                        int label) {
        for (std::size_t i = 0; i < per_class; ++i)
            ds.rows.push_back({pool[i].first, label, false, pool[i].second});
    };
    add_rows(pos_pool, 1);
    add_rows(neg_pool, 0);

    // Stratified 80/20: every 5th index per class after a seeded shuffle.
    Rng rng(seed ^ 0x8020u);
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (ds.rows[i].label ? pos_idx : neg_idx).push_back(i);
    rng.shuffle(pos_idx);
    rng.shuffle(neg_idx);
    for (std::size_t i = 0; i < pos_idx.size(); ++i)
        ds.rows[pos_idx[i]].test_split = (i % 5 == 0);
    for (std::size_t i = 0; i < neg_idx.size(); ++i)
        ds.rows[neg_idx[i]].test_split = (i % 5 == 0);

    for (const auto& row : ds.rows) {
        Sample s{extract_features(store, clusters, row.address), row.label};
        (row.test_split ? ds.test : ds.train).push_back(s);
    }
    return ds;
}

std::string roc_csv(const RandomForest& model, const std::vector<Sample>& test) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(test.size());
    for (const auto& s : test) scored.emplace_back(model.predict(s.x).first, s.label);
    std::sort(scored.begin(), scored.end());

    double total_pos = 0, total_neg = 0;
    for (const auto& [p, y] : scored) (y ? total_pos : total_neg) += 1;

    std::string csv = "threshold,tpr,fpr\n";
    std::set<double> thresholds{0.0, 1.0};
    for (const auto& [p, y] : scored) thresholds.insert(p);
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (const auto& [p, y] : scored) {
            if (p >= t) (y ? tp : fp) += 1;
        }
        csv += nlohmann::json(t).dump() + "," +
               nlohmann::json(total_pos ? tp / total_pos : 0.0).dump() + "," +
               nlohmann::json(total_neg ? fp / total_neg : 0.0).dump() + "\n";
    }
    return csv;
}

}  // namespace txtrace
