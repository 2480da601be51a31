#pragma once

#include <vector>

#include "sparta/bounds/aggregation.hpp"
#include "sparta/bounds/merit_order.hpp"
#include "sparta/cluster/assignment.hpp"
#include "sparta/esm/instance.hpp"
#include "sparta/lp/simplex.hpp"
#include "sparta/lp/solution.hpp"
#include "sparta/lp/system_model.hpp"

namespace sparta::bounds {

// Worst-case loss factor of the internal edges of a cluster.
//   Sum:     sum_l (1 - min_c eta) * length
//   Product: 1 - prod_l max(0, 1 - (1 - min_c eta) * length)
enum class LossForm { Sum, Product };

struct BoundOptions {
    LossForm loss_form = LossForm::Sum;
    // When false the upper bound may dispatch all existing capacity (no merit-order caps).
    bool merit_order = true;
};

// Loss factor of cluster a for product b (0 without lossy internal carriers).
double internal_loss_factor(const esm::Instance& instance, const cluster::ClusterAssignment& assignment, int cluster,
                            int product, LossForm form);

struct BoundModel {
    BoundKind kind = BoundKind::Lower;
    AggregatedInstance aggregated;
    lp::SystemModel model;
    // Upper bound only.
    lp::IndexTensor max_flow;       // [product][cluster][t] peak internal transfer variable, -1 if unused
    lp::IndexMatrix node_need;      // [product][node] epigraph of max(delta, lambda), -1 if unused
    esm::Matrix loss_factor;        // [product][cluster]
    MeritOrderTable merit;
    SecuredCapacityGap gaps;
};

// Relaxation: cluster sites, ideal internal transport, best-case availability,
// external edges with their full model (DC lines keep their endpoint potentials).
BoundModel build_lb_lp(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions& options = {});

// Restriction: worst-case availability, forced internal transport capacity and
// losses, merit-order caps and nodal capacity rows for non-transportable products.
BoundModel build_ub_lp(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions& options = {});

struct BoundSolution {
    lp::SolveStatus status = lp::SolveStatus::Infeasible;
    double tac = 0.0;
    double wall_time = 0.0;  // build plus solve, seconds
    long iterations = 0;
    lp::SystemSolution solution;  // valid when optimal
    esm::Tensor3 peak_flow;       // [product][cluster][t] internal transfer of an upper bound, empty otherwise
    bool optimal() const { return status == lp::SolveStatus::Optimal; }
};

BoundSolution solve_bound(const esm::Instance& instance, const BoundModel& bound, const lp::SolverOptions& options = {});

struct BoundPair {
    BoundModel lb_model;
    BoundModel ub_model;
    BoundSolution lb;
    BoundSolution ub;
};

// Builds and solves both bounds, concurrently when jobs != 1.
BoundPair solve_bounds(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions& options = {}, const lp::SolverOptions& solver = {}, int jobs = 0);

} // namespace sparta::bounds
