#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "txtrace/chain.hpp"
#include "txtrace/clustering.hpp"

namespace txtrace {

inline constexpr std::size_t kFeatureCount = 42;

// Canonical feature order; matrix exports and model files use it verbatim.
const std::array<std::string, kFeatureCount>& feature_names();
int feature_index(const std::string& name);  // -1 when unknown

using FeatureVector = std::array<double, kFeatureCount>;

// Deterministic per-address features. Day-granularity features use UTC
// calendar days; rate denominators are max(lifetime_seconds, 1); ratio
// features return 0 on a zero denominator.
FeatureVector extract_features(const ChainStore& store, const ClusterMap& clusters,
                               const std::string& address);

// CSV with the canonical header and one row per address, in input order.
std::string export_feature_csv(const ChainStore& store, const ClusterMap& clusters,
                               const std::vector<std::string>& addresses);

struct NormalizationParams {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> stddev{};  // population std; 0 maps feature to 0

    FeatureVector transform(const FeatureVector& x) const;
};

NormalizationParams fit_normalizer(const std::vector<FeatureVector>& rows);

struct MiRanking {
    std::string feature;
    double mi_nats;
};

// Mutual information (nats) between the equal-frequency-binned feature and a
// binary label, descending, ties broken by feature name.
std::vector<MiRanking> rank_features_mi(const std::vector<FeatureVector>& rows,
                                        const std::vector<int>& labels, int bins = 20);

}  // namespace txtrace
