#include "sparta/bounds/aggregation.hpp"

#include <algorithm>
#include <numeric>

namespace sparta::bounds {

const char* to_string(BoundKind kind)
{
    return kind == BoundKind::Lower ? "lower" : "upper";
}

double AggregatedInstance::existing_total(int component, int cluster) const
{
    const esm::Series& years = existing_capacity[component][cluster];
    return std::accumulate(years.begin(), years.end(), 0.0);
}

AggregatedInstance aggregate_parameters(const esm::Instance& in, const cluster::ClusterAssignment& assignment,
                                        BoundKind kind)
{
    AggregatedInstance agg;
    agg.base = &in;
    agg.assignment = assignment;
    agg.kind = kind;
    const int A = assignment.k();
    const std::size_t T = in.num_time_steps();
    const std::size_t years = in.temporal.num_years() - 1;

    agg.demand.assign(in.num_products(), esm::Matrix(A, esm::Series(T, 0.0)));
    for (std::size_t b = 0; b < in.num_products(); ++b)
        for (int a = 0; a < A; ++a)
            for (int n : assignment.clusters[a])
                for (std::size_t t = 0; t < T; ++t)
                    agg.demand[b][a][t] += in.demand[b][n][t];

    const std::size_t C = in.num_components();
    agg.existing_capacity.assign(C, {});
    agg.availability.assign(C, {});
    agg.capacity_limits.assign(C, {});
    agg.headroom.assign(C, {});
    for (std::size_t c = 0; c < C; ++c) {
        const esm::Component& comp = in.components[c];
        if (!comp.is_production())
            continue;
        agg.existing_capacity[c].assign(A, esm::Series(years, 0.0));
        agg.availability[c].assign(A, esm::Series(T, 0.0));
        agg.capacity_limits[c].assign(A, 0.0);
        agg.headroom[c].assign(A, 0.0);
        for (int a = 0; a < A; ++a) {
            const std::vector<int>& nodes = assignment.clusters[a];
            for (int n : nodes) {
                for (std::size_t y = 0; y < years; ++y)
                    agg.existing_capacity[c][a][y] += in.existing_capacity[c][n][y];
                agg.capacity_limits[c][a] += comp.capacity_limit[n];
                agg.headroom[c][a] += std::max(0.0, comp.capacity_limit[n] - in.existing_total(static_cast<int>(c), n));
            }
            for (std::size_t t = 0; t < T; ++t) {
                double v = in.availability[c][nodes.front()][t];
                for (int n : nodes)
                    v = kind == BoundKind::Lower ? std::max(v, in.availability[c][n][t])
                                                 : std::min(v, in.availability[c][n][t]);
                agg.availability[c][a][t] = v;
            }
        }
    }
    return agg;
}

} // namespace sparta::bounds
