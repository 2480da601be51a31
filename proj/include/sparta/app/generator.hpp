#pragma once

#include <cstdint>

#include "sparta/esm/instance.hpp"

namespace sparta::app {

struct GeneratorSpec {
    std::uint64_t seed = 1;
    int n_nodes = 12;
    int n_time_steps = 8;
    int n_products = 2;             // el, heat, then gas
    int n_non_transportable = 1;    // 0 or 1; the heat product
    int n_components = 5;           // production roster size, 3..5
    double density = 1.5;           // edges per node
    double demand_min = 5.0;
    double demand_max = 20.0;
    double availability_min = 0.05;
    double availability_max = 1.0;
    double ghg_share = 0.05;        // position of the cap between minimal and all-fossil emissions
    esm::TransportMode transport_mode = esm::TransportMode::Transshipment;
};

// Synthetic instance: random planar nodes joined by a Euclidean spanning tree
// plus the shortest remaining pairs, smooth availability profiles, brownfield
// plants and lines. Throws ConfigurationError for specs out of range or when
// the supply margin cannot be met after the retry budget.
esm::Instance generate_instance(const GeneratorSpec& spec);

} // namespace sparta::app
