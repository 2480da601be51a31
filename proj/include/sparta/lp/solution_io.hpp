#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sparta/esm/instance.hpp"
#include "sparta/lp/solution.hpp"

namespace sparta::lp {

inline constexpr const char* kSolutionSchema = "sparta-solution/1";

// Identifiers of the instance are used for keys so documents stay readable;
// site names come from the solution itself.
nlohmann::json solution_to_json(const esm::Instance& instance, const SystemSolution& solution);
SystemSolution solution_from_json(const esm::Instance& instance, const nlohmann::json& doc);

void write_solution_file(const std::string& path, const esm::Instance& instance, const SystemSolution& solution);
SystemSolution read_solution_file(const std::string& path, const esm::Instance& instance);

} // namespace sparta::lp
