#pragma once

#include <vector>

#include "sparta/bounds/bound_models.hpp"
#include "sparta/decompose/subproblem.hpp"
#include "sparta/lp/simplex.hpp"

namespace sparta::decompose {

// Recombined full-scale design: new capacity per node and edge, and the
// cluster each entry came from (-1 for external edges, taken from the upper bound).
struct FullDesign {
    esm::Matrix new_production;  // [component][node], zero rows for grid components
    esm::Matrix new_grid;        // [component][edge], zero rows for production components
    std::vector<int> node_cluster;
    std::vector<int> edge_cluster;
};

struct ClusterRedesign {
    int cluster = -1;
    lp::SolveStatus status = lp::SolveStatus::Infeasible;
    double tac = 0.0;
    double ghg = 0.0;
    double ghg_budget = 0.0;
    double internal_expansion = 0.0;  // new internal grid capacity, summed over components and edges
    long iterations = 0;
    double wall_time = 0.0;
    lp::SystemSolution solution;
};

struct RedesignResult {
    FullDesign design;
    std::vector<ClusterRedesign> clusters;
    double external_grid_capex = 0.0;  // existing and new external edges
    double tac = 0.0;                  // sum of cluster TACs plus external grid CAPEX
    double wall_time = 0.0;
};

// Solves every cluster subproblem (in parallel when jobs != 1) and recombines.
// Throws InfeasibleError naming every cluster whose subproblem failed.
RedesignResult redesign_all(const esm::Instance& instance, const bounds::BoundModel& ub,
                            const lp::SystemSolution& ub_solution, const lp::SolverOptions& solver = {},
                            int jobs = 0);

// Single-threaded reference of redesign_all.
RedesignResult redesign_all_serial(const esm::Instance& instance, const bounds::BoundModel& ub,
                                   const lp::SystemSolution& ub_solution, const lp::SolverOptions& solver = {});

} // namespace sparta::decompose
