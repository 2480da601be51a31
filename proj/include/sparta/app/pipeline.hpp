#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparta/decompose/fixed_design.hpp"
#include "sparta/decompose/redesign.hpp"
#include "sparta/driver/iteration.hpp"
#include "sparta/esm/instance.hpp"
#include "sparta/lp/solution.hpp"

namespace sparta::app {

struct FullSolve {
    lp::SolveStatus status = lp::SolveStatus::Infeasible;
    lp::SystemSolution solution;  // valid when optimal
    double wall_time = 0.0;
    long iterations = 0;
    std::size_t variables = 0;
    std::size_t constraints = 0;
    bool optimal() const { return status == lp::SolveStatus::Optimal; }
};

// Full-resolution benchmark. Structural infeasibility (unreachable demand)
// throws InfeasibleError; solver outcomes are reported through the status.
FullSolve solve_full(const esm::Instance& instance, const lp::SolverOptions& solver = {});

struct RunOptions {
    driver::SpartaConfig config;
    bool benchmark = true;
    bool force_network_opt = false;
};

struct ClusterReport {
    std::string cluster;
    int nodes = 0;
    double tac = 0.0;
    double ghg = 0.0;
    double ghg_budget = 0.0;
    double internal_expansion = 0.0;
};

// Costs and gaps of every phase. Epsilons are relative to the final lower bound.
struct ComparisonReport {
    std::optional<double> tac_full;
    double tac_lb = 0.0;
    double tac_ub = 0.0;
    double tac_redesign = 0.0;
    std::optional<double> tac_operational;  // absent when the recombined design is operationally infeasible
    std::optional<double> tac_network;      // present when network optimization ran
    double tac_final = 0.0;
    double epsilon_ub = 0.0;
    double epsilon_redesign = 0.0;
    double epsilon_final = 0.0;
    std::optional<double> epsilon_full;     // true gap of the final design against the benchmark
    int iterations = 0;
    int k_final = 0;
    std::string termination;
    bool operational_feasible = false;
    bool network_optimized = false;
    double wall_iterations = 0.0;
    double wall_redesign = 0.0;
    double wall_operational = 0.0;
    double wall_network = 0.0;
    double wall_sparta = 0.0;
    std::optional<double> wall_full;
    std::optional<double> speedup;
    std::vector<ClusterReport> clusters;
};

struct RunArtifacts {
    driver::IterationResult iterations;
    decompose::RedesignResult redesign;
    decompose::DesignEvaluation operational;
    std::optional<decompose::DesignEvaluation> network;
    lp::SystemSolution final_solution;
    std::optional<FullSolve> full;
    ComparisonReport report;
};

// Relative gap against a lower bound; both at or below zero_tac count as 0.
double relative_to_lower(double tac_lb, double tac, double zero_tac = 1e-9);

// Iterate, redesign, check operation and, when the design is operationally
// infeasible or forced, optimize the network. Errors carry the phase name.
RunArtifacts run_pipeline(const esm::Instance& instance, const RunOptions& options);

} // namespace sparta::app
