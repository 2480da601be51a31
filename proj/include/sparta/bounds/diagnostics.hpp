#pragma once

#include <json.hpp>

#include "sparta/bounds/bound_models.hpp"

namespace sparta::bounds {

// Per-cluster document of a bound model: aggregated demand peaks, internal
// loss factors, forced internal expansions (needs a solved upper bound) and
// the delta/lambda tables of non-transportable products.
nlohmann::json bound_diagnostics(const esm::Instance& instance, const BoundModel& bound,
                                 const BoundSolution* solution = nullptr);

} // namespace sparta::bounds
