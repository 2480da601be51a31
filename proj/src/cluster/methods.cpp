#include "sparta/cluster/methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sparta/common/error.hpp"
#include "sparta/common/parallel.hpp"

namespace sparta::cluster {

namespace {

constexpr int kMaxLloydIterations = 300;

std::uint64_t start_seed(std::uint64_t seed, int start)
{
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(start + 1);
}

double unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index of the nearest centroid; ties go to the lowest index.
int nearest(const esm::Series& point, const esm::Matrix& centroids, double* dist = nullptr)
{
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(point, centroids[c]);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(c);
        }
    }
    if (dist)
        *dist = bd;
    return best;
}

bool better(const KMeansResult& a, const KMeansResult& b)
{
    return a.inertia < b.inertia || (a.inertia == b.inertia && a.start < b.start);
}

void check_k(const esm::Matrix& features, int k)
{
    if (k < 1 || k > static_cast<int>(features.size()))
        throw DomainError("cluster count " + std::to_string(k) + " outside [1, " + std::to_string(features.size()) + "]");
}

} // namespace

const char* to_string(Method method)
{
    switch (method) {
    case Method::KMeans:
        return "kmeans";
    case Method::KMedoids:
        return "kmedoids";
    case Method::Hierarchical:
        return "hierarchical";
    }
    return "?";
}

Method parse_method(const std::string& name)
{
    if (name == "kmeans")
        return Method::KMeans;
    if (name == "kmedoids")
        return Method::KMedoids;
    if (name == "hierarchical")
        return Method::Hierarchical;
    throw ConfigurationError("unknown cluster method '" + name + "'");
}

KMeansResult kmeans_single(const esm::Matrix& x, int k, std::uint64_t seed)
{
    const int n = static_cast<int>(x.size());
    std::mt19937_64 rng(seed);
    KMeansResult r;

    // k-means++ seeding.
    std::vector<char> chosen(n, 0);
    int first = std::min(n - 1, static_cast<int>(unit(rng) * n));
    r.centroids.push_back(x[first]);
    chosen[first] = 1;
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i)
        d2[i] = squared_distance(x[i], x[first]);
    while (static_cast<int>(r.centroids.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            total += d2[i];
        int pick = -1;
        if (total > 0.0) {
            double u = unit(rng) * total;
            for (int i = 0; i < n && pick < 0; ++i) {
                u -= d2[i];
                if (u < 0.0 && d2[i] > 0.0)
                    pick = i;
            }
            if (pick < 0)
                for (int i = n - 1; i >= 0 && pick < 0; --i)
                    if (d2[i] > 0.0)
                        pick = i;
        } else {
            for (int i = 0; i < n && pick < 0; ++i)
                if (!chosen[i])
                    pick = i;
        }
        chosen[pick] = 1;
        r.centroids.push_back(x[pick]);
        for (int i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], squared_distance(x[i], x[pick]));
    }

    r.labels.assign(n, -1);
    const std::size_t dim = x.front().size();
    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        std::vector<double> dist(n);
        for (int i = 0; i < n; ++i) {
            const int c = nearest(x[i], r.centroids, &dist[i]);
            changed = changed || c != r.labels[i];
            r.labels[i] = c;
        }
        // Empty clusters take the point farthest from its centroid.
        std::vector<int> count(k, 0);
        for (int c : r.labels)
            ++count[c];
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0)
                continue;
            int far = -1;
            for (int i = 0; i < n; ++i)
                if (count[r.labels[i]] > 1 && dist[i] > 0.0 && (far < 0 || dist[i] > dist[far]))
                    far = i;
            if (far < 0)
                continue;
            --count[r.labels[far]];
            r.labels[far] = c;
            ++count[c];
            dist[far] = 0.0;
            r.centroids[c] = x[far];
            changed = true;
        }
        if (!changed && iter > 0)
            break;
        esm::Matrix sum(k, esm::Series(dim, 0.0));
        for (int i = 0; i < n; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                sum[r.labels[i]][j] += x[i][j];
        for (int c = 0; c < k; ++c)
            if (count[c] > 0)
                for (std::size_t j = 0; j < dim; ++j)
                    r.centroids[c][j] = sum[c][j] / count[c];
    }
    r.inertia = 0.0;
    for (int i = 0; i < n; ++i)
        r.inertia += squared_distance(x[i], r.centroids[r.labels[i]]);
    return r;
}

KMeansResult kmeans_serial(const esm::Matrix& features, int k, std::uint64_t seed)
{
    check_k(features, k);
    KMeansResult best;
    for (int s = 0; s < kKMeansStarts; ++s) {
        KMeansResult r = kmeans_single(features, k, start_seed(seed, s));
        r.start = s;
        if (s == 0 || better(r, best))
            best = std::move(r);
    }
    return best;
}

KMeansResult kmeans(const esm::Matrix& features, int k, std::uint64_t seed, int jobs)
{
    check_k(features, k);
    std::vector<KMeansResult> runs(kKMeansStarts);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_jobs(jobs))
    for (int s = 0; s < kKMeansStarts; ++s) {
        runs[s] = kmeans_single(features, k, start_seed(seed, s));
        runs[s].start = s;
    }
    // Deterministic reduction in start order.
    KMeansResult best = std::move(runs[0]);
    for (int s = 1; s < kKMeansStarts; ++s)
        if (better(runs[s], best))
            best = std::move(runs[s]);
    return best;
}

std::vector<int> kmedoids(const DistanceMatrix& d, int k)
{
    const int n = static_cast<int>(d.size());
    if (k < 1 || k > n)
        throw DomainError("cluster count outside [1, n]");
    std::vector<int> medoids;
    std::vector<char> is_medoid(n, 0);
    std::vector<double> nearest_d(n, std::numeric_limits<double>::infinity());

    // BUILD: greedy additions that most reduce the total distance.
    for (int m = 0; m < k; ++m) {
        int best = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < n; ++c) {
            if (is_medoid[c])
                continue;
            // The first medoid minimizes the total distance; later ones maximize the reduction.
            double gain = 0.0;
            for (int i = 0; i < n; ++i)
                gain += m == 0 ? -d(i, c) : std::max(0.0, nearest_d[i] - d(i, c));
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
        for (int i = 0; i < n; ++i)
            nearest_d[i] = std::min(nearest_d[i], d(i, best));
    }

    auto total_cost = [&](const std::vector<int>& meds) {
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int m : meds)
                best = std::min(best, d(i, m));
            cost += best;
        }
        return cost;
    };

    // SWAP: apply the best improving exchange until none is left.
    double cost = total_cost(medoids);
    for (int round = 0; round < 100 * n; ++round) {
        double best_cost = cost;
        int best_slot = -1, best_point = -1;
        for (int slot = 0; slot < k; ++slot)
            for (int p = 0; p < n; ++p) {
                if (is_medoid[p])
                    continue;
                std::vector<int> trial = medoids;
                trial[slot] = p;
                const double c = total_cost(trial);
                if (c < best_cost - 1e-12 * (1.0 + std::abs(best_cost))) {
                    best_cost = c;
                    best_slot = slot;
                    best_point = p;
                }
            }
        if (best_slot < 0)
            break;
        is_medoid[medoids[best_slot]] = 0;
        is_medoid[best_point] = 1;
        medoids[best_slot] = best_point;
        cost = best_cost;
    }

    // Ties go to the medoid with the lowest node index.
    std::sort(medoids.begin(), medoids.end());
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int m = 1; m < k; ++m)
            if (d(i, medoids[m]) < d(i, medoids[best]))
                best = m;
        labels[i] = best;
    }
    return labels;
}

std::vector<int> ward(const esm::Matrix& x, int k)
{
    const int n = static_cast<int>(x.size());
    if (k < 1 || k > n)
        throw DomainError("cluster count outside [1, n]");
    std::vector<esm::Series> centroid(x.begin(), x.end());
    std::vector<double> size(n, 1.0);
    std::vector<int> label(n);
    for (int i = 0; i < n; ++i)
        label[i] = i;
    std::vector<char> active(n, 1);
    for (int clusters = n; clusters > k; --clusters) {
        int ba = -1, bb = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            if (!active[a])
                continue;
            for (int b = a + 1; b < n; ++b) {
                if (!active[b])
                    continue;
                // Increase of the within-cluster sum of squares when merging a and b.
                const double cost = size[a] * size[b] / (size[a] + size[b]) * squared_distance(centroid[a], centroid[b]);
                if (cost < best) {
                    best = cost;
                    ba = a;
                    bb = b;
                }
            }
        }
        const double total = size[ba] + size[bb];
        for (std::size_t j = 0; j < centroid[ba].size(); ++j)
            centroid[ba][j] = (size[ba] * centroid[ba][j] + size[bb] * centroid[bb][j]) / total;
        size[ba] = total;
        active[bb] = 0;
        for (int& l : label)
            if (l == bb)
                l = ba;
    }
    return label;
}

std::vector<int> cluster_labels(const esm::Matrix& features, int k, Method method, std::uint64_t seed, int jobs)
{
    check_k(features, k);
    switch (method) {
    case Method::KMeans:
        return canonical_labels(kmeans(features, k, seed, jobs).labels);
    case Method::KMedoids:
        return canonical_labels(kmedoids(pairwise_distances(features, jobs), k));
    case Method::Hierarchical:
        return canonical_labels(ward(features, k));
    }
    throw ConfigurationError("unknown cluster method");
}

ClusterAssignment cluster(const esm::Matrix& features, const esm::Topology& topology, int k, Method method,
                          std::uint64_t seed, int jobs)
{
    return make_assignment(cluster_labels(features, k, method, seed, jobs), topology);
}

} // namespace sparta::cluster
