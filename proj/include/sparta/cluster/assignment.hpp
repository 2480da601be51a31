#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sparta/esm/instance.hpp"

namespace sparta::cluster {

// Partition of the nodes into clusters with the induced edge classification.
struct ClusterAssignment {
    std::vector<int> cluster_of;                  // node -> cluster
    std::vector<std::vector<int>> clusters;       // cluster -> nodes, ascending
    std::vector<std::vector<int>> internal_edges; // cluster -> edges with both endpoints inside
    std::vector<std::vector<int>> external_edges; // cluster -> edges with exactly one endpoint inside

    int k() const { return static_cast<int>(clusters.size()); }
    int cardinality(int a) const { return static_cast<int>(clusters[a].size()); }
    // Cluster whose internal set holds edge l, or -1 for external edges.
    int internal_cluster(const esm::Topology& topology, int edge) const;
};

// Relabels clusters by first appearance in node order.
std::vector<int> canonical_labels(const std::vector<int>& labels);

// Builds the assignment from per-node labels (any integers; relabelled canonically).
ClusterAssignment make_assignment(const std::vector<int>& labels, const esm::Topology& topology);

// Splits every cluster into the connected components of its internal edges.
ClusterAssignment split_disconnected(const ClusterAssignment& assignment, const esm::Topology& topology);

// Two-column text "node,cluster" with one row per node in declared node order.
void write_assignment_csv(std::ostream& out, const ClusterAssignment& assignment, const esm::Topology& topology);
std::string assignment_csv(const ClusterAssignment& assignment, const esm::Topology& topology);

} // namespace sparta::cluster
