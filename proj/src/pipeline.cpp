#include "txtrace/pipeline.hpp"

#include <json.hpp>

#include "txtrace/errors.hpp"

namespace txtrace {

using nlohmann::ordered_json;

TagDatabase load_tag_database(const std::string& tags_csv_path, const ClusterMap& clusters,
                              bool propagate) {
    TagMultimap raw = import_tags(tags_csv_path);
    TagDatabase db = build_tag_database(raw);
    if (propagate) db = propagate_to_clusters(db, clusters);
    return db;
}

TrainOutcome train_pipeline(const ChainStore& store, const ClusterMap& clusters,
                            const std::vector<std::string>& positives,
                            const std::vector<std::string>& negatives,
                            const ForestParams& params, std::size_t target_size) {
    TrainOutcome out;
    out.dataset = assemble_dataset(store, clusters, positives, negatives, target_size,
                                   params.rng_seed);
    std::vector<FeatureVector> train_rows;
    train_rows.reserve(out.dataset.train.size());
    for (const auto& s : out.dataset.train) train_rows.push_back(s.x);
    NormalizationParams norm = fit_normalizer(train_rows);
    out.model = train_forest(out.dataset.train, params, norm);
    out.cv = cross_validate(out.dataset.train, 5, params);
    out.test = evaluate(out.model, out.dataset.test);
    return out;
}

namespace {

ordered_json metrics_block(const Metrics& m) {
    ordered_json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}};
    return j;
}

}  // namespace

std::string metrics_json(const TrainOutcome& outcome) {
    ordered_json j;
    j["format"] = "txtrace-metrics";
    j["version"] = 1;
    j["dataset"]["rows"] = outcome.dataset.rows.size();
    j["dataset"]["train"] = outcome.dataset.train.size();
    j["dataset"]["test"] = outcome.dataset.test.size();
    j["cross_validation"]["folds"] = ordered_json::array();
    for (const auto& fold : outcome.cv.folds)
        j["cross_validation"]["folds"].push_back(metrics_block(fold));
    j["cross_validation"]["mean"] = metrics_block(outcome.cv.mean);
    j["test"] = metrics_block(outcome.test);
    return j.dump(2) + "\n";
}

}  // namespace txtrace
