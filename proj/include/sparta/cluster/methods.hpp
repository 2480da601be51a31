#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparta/cluster/assignment.hpp"
#include "sparta/cluster/distance.hpp"
#include "sparta/esm/instance.hpp"

namespace sparta::cluster {

enum class Method { KMeans, KMedoids, Hierarchical };

const char* to_string(Method method);
// Accepts "kmeans", "kmedoids", "hierarchical". Throws ConfigurationError otherwise.
Method parse_method(const std::string& name);

struct KMeansResult {
    std::vector<int> labels;
    esm::Matrix centroids;
    double inertia = 0.0;
    int start = 0;  // index of the winning start
};

inline constexpr int kKMeansStarts = 10;

// Lloyd iterations from one k-means++ seeding.
KMeansResult kmeans_single(const esm::Matrix& features, int k, std::uint64_t seed);
// Lowest-inertia result over the seeded starts; ties go to the lower start index.
KMeansResult kmeans(const esm::Matrix& features, int k, std::uint64_t seed, int jobs = 0);
KMeansResult kmeans_serial(const esm::Matrix& features, int k, std::uint64_t seed);

// Partitioning around medoids (BUILD then SWAP) on a distance matrix.
std::vector<int> kmedoids(const DistanceMatrix& distances, int k);

// Agglomerative clustering with Ward linkage, stopped at k clusters.
std::vector<int> ward(const esm::Matrix& features, int k);

// Canonical labels (first appearance) for the chosen method. Throws
// DomainError unless 1 <= k <= rows.
std::vector<int> cluster_labels(const esm::Matrix& features, int k, Method method, std::uint64_t seed, int jobs = 0);

ClusterAssignment cluster(const esm::Matrix& features, const esm::Topology& topology, int k, Method method,
                          std::uint64_t seed, int jobs = 0);

} // namespace sparta::cluster
