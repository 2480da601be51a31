#pragma once

#include <cstddef>
#include <vector>

#include "sparta/esm/instance.hpp"

namespace sparta::cluster {

// Dense symmetric Euclidean distance matrix, row-major.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
    const std::vector<double>& data() const { return d_; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

double squared_distance(const esm::Series& a, const esm::Series& b);

// Rows are distributed over threads; jobs < 1 uses every hardware thread.
DistanceMatrix pairwise_distances(const esm::Matrix& features, int jobs = 0);
DistanceMatrix pairwise_distances_serial(const esm::Matrix& features);

} // namespace sparta::cluster
