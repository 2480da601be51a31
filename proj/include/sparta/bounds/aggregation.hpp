#pragma once

#include "sparta/cluster/assignment.hpp"
#include "sparta/esm/instance.hpp"

namespace sparta::bounds {

enum class BoundKind { Lower, Upper };

const char* to_string(BoundKind kind);

// Cluster-level parameters. Existing capacity and demand are exact sums over
// the member nodes; availability is the per-step maximum (lower) or minimum
// (upper) over members.
struct AggregatedInstance {
    const esm::Instance* base = nullptr;
    cluster::ClusterAssignment assignment;
    BoundKind kind = BoundKind::Lower;
    esm::Tensor3 existing_capacity;  // [component][cluster][previous year], production components
    esm::Tensor3 demand;             // [product][cluster][t]
    esm::Tensor3 availability;       // [component][cluster][t], production components
    esm::Matrix capacity_limits;     // [component][cluster], sum of nodal limits
    esm::Matrix headroom;            // [component][cluster], sum of nodal max(0, limit - existing)

    double existing_total(int component, int cluster) const;
};

AggregatedInstance aggregate_parameters(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                                        BoundKind kind);

} // namespace sparta::bounds
