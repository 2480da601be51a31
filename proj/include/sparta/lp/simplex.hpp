#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sparta/lp/linear_program.hpp"

namespace sparta::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SolveStatus status);

struct SolverOptions {
    // Primal feasibility and optimality tolerance, applied to unscaled rows
    // relative to (1 + |rhs|).
    double tolerance = 1e-7;
    std::size_t max_variables = 4'000'000;
    // 0 selects a limit proportional to the problem size.
    long max_iterations = 0;
    int refactor_interval = 100;
    bool scaling = true;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    double objective_value = 0.0;
    std::vector<double> primal_values;
    long iteration_count = 0;
    double wall_time = 0.0;  // seconds

    bool optimal() const { return status == SolveStatus::Optimal; }
};

// Bounded primal revised simplex (two phases). Throws SizeLimitError when the
// variable count exceeds the cap and NumericError on numerical breakdown.
SolveResult solve(const LinearProgram& lp, const SolverOptions& options);
SolveResult solve(const LinearProgram& lp, double tolerance = 1e-7);

} // namespace sparta::lp
