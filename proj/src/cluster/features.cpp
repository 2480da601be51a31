#include "sparta/cluster/features.hpp"

#include <cmath>

namespace sparta::cluster {

esm::Matrix node_features(const esm::Instance& instance, const FeatureOptions& options)
{
    esm::Matrix out;
    out.reserve(instance.num_nodes());
    for (std::size_t n = 0; n < instance.num_nodes(); ++n) {
        const esm::Node& node = instance.topology.nodes[n];
        esm::Series row{node.x, node.y};
        if (options.include_demand) {
            for (std::size_t b = 0; b < instance.num_products(); ++b) {
                const esm::Series& d = instance.demand[b][n];
                double sum = 0.0;
                for (double v : d)
                    sum += v;
                row.push_back(d.empty() ? 0.0 : sum / static_cast<double>(d.size()));
            }
        }
        out.push_back(std::move(row));
    }
    if (options.include_demand)
        standardize_columns(out);
    return out;
}

void standardize_columns(esm::Matrix& features)
{
    if (features.empty())
        return;
    const std::size_t rows = features.size();
    const std::size_t cols = features.front().size();
    for (std::size_t j = 0; j < cols; ++j) {
        double mean = 0.0;
        for (const esm::Series& r : features)
            mean += r[j];
        mean /= static_cast<double>(rows);
        double var = 0.0;
        for (const esm::Series& r : features)
            var += (r[j] - mean) * (r[j] - mean);
        const double sd = std::sqrt(var / static_cast<double>(rows));
        for (esm::Series& r : features)
            r[j] = sd > 0.0 ? (r[j] - mean) / sd : 0.0;
    }
}

} // namespace sparta::cluster
