#include "sparta/cluster/distance.hpp"

#include <cmath>

#include "sparta/common/parallel.hpp"

namespace sparta::cluster {

double squared_distance(const esm::Series& a, const esm::Series& b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

DistanceMatrix pairwise_distances_serial(const esm::Matrix& features)
{
    const std::size_t n = features.size();
    DistanceMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::sqrt(squared_distance(features[i], features[j]));
            out.at(i, j) = d;
            out.at(j, i) = d;
        }
    return out;
}

DistanceMatrix pairwise_distances(const esm::Matrix& features, int jobs)
{
    const long n = static_cast<long>(features.size());
    DistanceMatrix out(features.size());
    // Each thread fills whole rows, so writes never overlap.
#pragma omp parallel for schedule(dynamic, 16) num_threads(resolve_jobs(jobs))
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            if (i != j)
                out.at(i, j) = std::sqrt(squared_distance(features[i], features[j]));
    return out;
}

} // namespace sparta::cluster
