#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sparta/bounds/bound_models.hpp"
#include "sparta/cluster/features.hpp"
#include "sparta/cluster/methods.hpp"
#include "sparta/esm/instance.hpp"
#include "sparta/lp/simplex.hpp"

namespace sparta::driver {

enum class StepRule { Fixed, FastForward };

struct SpartaConfig {
    double epsilon_target = 0.05;
    int initial_k = 2;
    StepRule step_rule = StepRule::FastForward;
    int fixed_step = 1;  // clusters added per iteration under StepRule::Fixed
    int min_step = 1;
    int max_step = std::numeric_limits<int>::max();
    cluster::Method method = cluster::Method::KMedoids;
    cluster::FeatureOptions features;
    std::uint64_t seed = 1;
    int max_iterations = 1000;
    lp::SolverOptions solver;
    bounds::BoundOptions bound_options;
    int jobs = 0;
    // Both bounds at or below this value count as a converged zero-cost system.
    double zero_tac = 1e-9;

    // Throws ConfigurationError on out-of-range settings.
    void check() const;
};

// Parses "fast-forward" or "fixed:<n>" into the config.
void parse_step_rule(const std::string& text, SpartaConfig& config);

struct BoundIterationRecord {
    int iteration = 0;
    int k_requested = 0;
    int k_effective = 0;
    double tac_lb = 0.0;
    double tac_ub = 0.0;   // +inf when the upper bound is infeasible
    double epsilon = 0.0;  // +inf when the upper bound is infeasible
    double wall_cluster = 0.0;
    double wall_lb = 0.0;
    double wall_ub = 0.0;
    lp::SolveStatus ub_status = lp::SolveStatus::Optimal;

    bool ub_feasible() const { return ub_status == lp::SolveStatus::Optimal; }
};

// Relative optimality gap (ub - lb) / lb. Throws DomainError when lb <= 0.
double gap(double tac_lb, double tac_ub);

// Next requested cluster count from the two latest records: linear
// extrapolation of both bounds towards the band of half-width
// epsilon_target * lb / 2 around their latest mean. The step from the latest
// k is clamped into [min_step, max_step].
int fast_forward_next_k(const BoundIterationRecord& previous, const BoundIterationRecord& latest,
                        double epsilon_target, int min_step, int max_step);

enum class Termination { Converged, FullResolution, MaxIterations };

const char* to_string(Termination reason);

struct IterationResult {
    std::vector<BoundIterationRecord> history;
    Termination termination = Termination::Converged;
    cluster::ClusterAssignment assignment;  // of the final iteration
    bounds::BoundPair bounds;               // models and solutions of the final iteration
    double wall_time = 0.0;

    const BoundIterationRecord& final_record() const { return history.back(); }
};

// Cluster, bound and refine until the gap target, full resolution or the
// iteration limit. Throws InfeasibleError when the relaxation is infeasible
// or the restriction stays infeasible at full resolution.
IterationResult run_iterations(const esm::Instance& instance, const SpartaConfig& config);

} // namespace sparta::driver
