#include "sparta/cluster/assignment.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

namespace sparta::cluster {

int ClusterAssignment::internal_cluster(const esm::Topology& topology, int edge) const
{
    const esm::Edge& e = topology.edges[edge];
    return cluster_of[e.from] == cluster_of[e.to] ? cluster_of[e.from] : -1;
}

std::vector<int> canonical_labels(const std::vector<int>& labels)
{
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t n = 0; n < labels.size(); ++n) {
        auto [it, fresh] = remap.try_emplace(labels[n], static_cast<int>(remap.size()));
        out[n] = it->second;
    }
    return out;
}

ClusterAssignment make_assignment(const std::vector<int>& labels, const esm::Topology& topology)
{
    ClusterAssignment a;
    a.cluster_of = canonical_labels(labels);
    int k = 0;
    for (int c : a.cluster_of)
        k = std::max(k, c + 1);
    a.clusters.assign(k, {});
    a.internal_edges.assign(k, {});
    a.external_edges.assign(k, {});
    for (std::size_t n = 0; n < a.cluster_of.size(); ++n)
        a.clusters[a.cluster_of[n]].push_back(static_cast<int>(n));
    for (std::size_t l = 0; l < topology.num_edges(); ++l) {
        const esm::Edge& e = topology.edges[l];
        const int cf = a.cluster_of[e.from];
        const int ct = a.cluster_of[e.to];
        if (cf == ct) {
            a.internal_edges[cf].push_back(static_cast<int>(l));
        } else {
            a.external_edges[cf].push_back(static_cast<int>(l));
            a.external_edges[ct].push_back(static_cast<int>(l));
        }
    }
    return a;
}

ClusterAssignment split_disconnected(const ClusterAssignment& assignment, const esm::Topology& topology)
{
    const int n = static_cast<int>(assignment.cluster_of.size());
    // Union-find over internal edges only.
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i)
        parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const esm::Edge& e : topology.edges)
        if (assignment.cluster_of[e.from] == assignment.cluster_of[e.to]) {
            const int a = find(e.from), b = find(e.to);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i)
        labels[i] = find(i);
    return make_assignment(labels, topology);
}

void write_assignment_csv(std::ostream& out, const ClusterAssignment& assignment, const esm::Topology& topology)
{
    out << "node,cluster\n";
    for (std::size_t n = 0; n < topology.num_nodes(); ++n)
        out << topology.nodes[n].id << ',' << assignment.cluster_of[n] << '\n';
}

std::string assignment_csv(const ClusterAssignment& assignment, const esm::Topology& topology)
{
    std::ostringstream out;
    write_assignment_csv(out, assignment, topology);
    return out.str();
}

} // namespace sparta::cluster
