#pragma once

#include "sparta/esm/instance.hpp"

namespace sparta::cluster {

struct FeatureOptions {
    // Append per-node mean demand of every product, then standardize all columns.
    bool include_demand = false;
};

// One row per node: (x, y), optionally followed by mean demands.
esm::Matrix node_features(const esm::Instance& instance, const FeatureOptions& options = {});

// Zero mean, unit population variance per column; constant columns become 0.
void standardize_columns(esm::Matrix& features);

} // namespace sparta::cluster
