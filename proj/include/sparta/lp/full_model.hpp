#pragma once

#include "sparta/esm/instance.hpp"
#include "sparta/lp/system_model.hpp"

namespace sparta::lp {

// Full-resolution model: one site per node, every edge modelled. Throws
// InfeasibleError when a transportable product has demand at a node that no
// producer, import, or grid path can reach.
SystemModel build_full_lp(const esm::Instance& instance);

// Nodes with demand for product b that cannot be supplied; empty when all are reachable.
std::vector<int> unreachable_demand_nodes(const esm::Instance& instance, int product);

} // namespace sparta::lp
