#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sparta/driver/iteration.hpp"

namespace sparta::driver {

inline constexpr const char* kConvergenceHeader = "iter,k_requested,k_effective,tac_lb,tac_ub,epsilon,wall_lb_s,wall_ub_s";

// One CSV row per iteration; infeasible upper bounds are written as "inf".
void write_convergence_log(std::ostream& out, const std::vector<BoundIterationRecord>& history);
std::string convergence_log(const std::vector<BoundIterationRecord>& history);
void write_convergence_log_file(const std::string& path, const std::vector<BoundIterationRecord>& history);

} // namespace sparta::driver
