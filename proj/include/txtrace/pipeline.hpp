#pragma once

#include <optional>
#include <string>
#include <vector>

#include "txtrace/classifier.hpp"
#include "txtrace/explorer.hpp"
#include "txtrace/tags.hpp"

namespace txtrace {

// Import + address-level disambiguation + optional cluster propagation, the
// standard way every pipeline stage builds its tag database.
TagDatabase load_tag_database(const std::string& tags_csv_path, const ClusterMap& clusters,
                              bool propagate = true);

// Feature extraction + 80/20 split + forest training over labeled address
// lists; returns the model plus held-out metrics.
struct TrainOutcome {
    RandomForest model;
    CvResult cv;
    Metrics test;
    LabeledDataset dataset;
};

TrainOutcome train_pipeline(const ChainStore& store, const ClusterMap& clusters,
                            const std::vector<std::string>& positives,
                            const std::vector<std::string>& negatives,
                            const ForestParams& params, std::size_t target_size);

std::string metrics_json(const TrainOutcome& outcome);

}  // namespace txtrace
