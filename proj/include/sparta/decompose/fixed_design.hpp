#pragma once

#include "sparta/decompose/redesign.hpp"
#include "sparta/lp/simplex.hpp"
#include "sparta/lp/solution.hpp"

namespace sparta::decompose {

struct DesignEvaluation {
    lp::SolveStatus status = lp::SolveStatus::Infeasible;
    double tac = 0.0;
    double wall_time = 0.0;
    lp::SystemSolution solution;  // valid when optimal
    bool optimal() const { return status == lp::SolveStatus::Optimal; }
};

// Full network with every capacity fixed; only operation is optimized.
// Infeasibility is a regular outcome (DC phase-angle coupling) and is reported
// through the status.
DesignEvaluation operational_check(const esm::Instance& instance, const FullDesign& design,
                                   const lp::SolverOptions& solver = {});

// Full network with production capacity fixed and grid expansion optimized.
// Throws InfeasibleError naming the clusters whose boundary cannot supply
// their demand when the grid limits are insufficient.
DesignEvaluation network_optimization(const esm::Instance& instance, const FullDesign& design,
                                      const lp::SolverOptions& solver = {});

} // namespace sparta::decompose
