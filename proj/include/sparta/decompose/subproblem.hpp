#pragma once

#include <vector>

#include "sparta/bounds/bound_models.hpp"
#include "sparta/esm/instance.hpp"
#include "sparta/lp/solution.hpp"
#include "sparta/lp/system_model.hpp"

namespace sparta::decompose {

// Full-resolution model of one cluster with the upper-bound solution's
// cluster totals as boundary conditions.
struct ClusterSubproblem {
    int cluster = -1;
    std::vector<int> nodes;
    std::vector<int> internal_edges;
    esm::Series budget;            // [component] new capacity to distribute, production components
    double ghg_budget = 0.0;       // +inf without an emission cap
    esm::Tensor3 boundary_exports; // [product][local site][t] fixed flows on external edges
    lp::SystemModel model;
};

// Builds the redesign LP of one cluster:
//  - nodal model over the cluster nodes with its internal edges (expansion free, costed),
//  - per production component, new capacity summed over the nodes equals the cluster's,
//  - external-edge flows fixed per time step at their endpoint nodes,
//  - emissions and imports capped at the cluster's upper-bound values,
//  - for lossy products the cluster's net supply covers its internal losses plus
//    its share of the upper bound's surplus,
//  - exact nodal secured capacity; system-wide secured capacity and limits are
//    implied by the fixed totals and left out.
ClusterSubproblem build_cluster_subproblem(const esm::Instance& instance, const bounds::BoundModel& ub,
                                           const lp::SystemSolution& ub_solution, int cluster);

} // namespace sparta::decompose
