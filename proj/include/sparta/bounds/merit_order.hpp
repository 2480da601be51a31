#pragma once

#include <vector>

#include "sparta/cluster/assignment.hpp"
#include "sparta/esm/instance.hpp"

namespace sparta::bounds {

// Usable share of existing capacity for non-transportable products. The
// reference cost of a product is the lowest operating cost among components
// that produce it and may still be expanded somewhere; existing components
// costlier than that are never usable.
struct MeritOrderTable {
    std::vector<double> reference_op_cost;     // [product], +inf when nothing is buildable
    std::vector<esm::Tensor3> usable_share;    // [product][component][node][t]; empty for transportable products

    bool empty() const;
    // Share of component c usable at node n and t: minimum over the
    // non-transportable products it produces, 1 when it produces none.
    double share(int component, int node, int t) const;
};

MeritOrderTable merit_order(const esm::Instance& instance);

// All-ones table: existing capacity fully usable (no merit-order restriction).
MeritOrderTable unrestricted_merit_order(const esm::Instance& instance);

// Per-product gaps at each node for non-transportable products; rows of
// transportable products are empty.
struct SecuredCapacityGap {
    esm::Matrix delta;   // [product][node], may be negative
    esm::Matrix lambda;  // [product][node], exogenous part, >= 0
};

SecuredCapacityGap secured_gaps(const esm::Instance& instance, const MeritOrderTable& merit);

// Forced expansion of an internal edge: max(0, peak flow - existing capacity).
double forced_internal_expansion(double peak_flow, double existing_capacity);

} // namespace sparta::bounds
