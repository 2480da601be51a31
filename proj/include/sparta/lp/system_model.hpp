#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparta/esm/instance.hpp"
#include "sparta/lp/linear_program.hpp"

namespace sparta::lp {

using IndexMatrix = std::vector<std::vector<int>>;
using IndexTensor = std::vector<IndexMatrix>;

// A balance point of the model: a single node or a group of nodes.
struct Site {
    std::string name;
    std::vector<int> nodes;
};

// A topology edge modelled with explicit flow variables between two sites.
// DC lines use the potential variables named by from_angle / to_angle.
struct Line {
    int edge = -1;
    int from_site = -1;
    int to_site = -1;
    int from_angle = -1;
    int to_angle = -1;
};

struct SiteLayout {
    std::vector<Site> sites;
    std::vector<Line> lines;
    std::vector<std::string> angle_keys;
};

// Site-level parameters of a model. Aggregated models fill these from cluster
// data; nodal models copy the instance.
struct ModelSpec {
    SiteLayout layout;
    esm::Tensor3 availability;   // [component][site][t], production components
    esm::Tensor3 demand;         // [product][site][t]
    esm::Matrix existing;        // [component][site], production capacity over previous years
    esm::Matrix headroom;        // [component][site], upper bound on new capacity
    // Existing-capacity CAPEX enters the objective for these locations.
    std::vector<int> scope_nodes;
    std::vector<int> scope_edges;
    // Constant exports at sites (flows on edges outside the model): [product][site][t].
    esm::Tensor3 fixed_exports;
    // Fixed new capacity: production [component][site], grid [component][edge].
    std::optional<esm::Matrix> fixed_new_production;
    std::optional<esm::Matrix> fixed_new_grid;
    bool system_balance = true;    // loss-aware system balance for lossy products
    bool system_secured = true;    // system-wide secured capacity
    bool system_limits = true;     // system-wide capacity limits
    bool ghg_cap = true;
    bool nodal_secured = true;     // per-site secured capacity of non-transportable products
};

// A built model: the LP plus the index maps needed to read a solution back.
struct SystemModel {
    LinearProgram lp;
    SiteLayout layout;
    std::vector<int> scope_nodes;
    std::vector<int> scope_edges;
    IndexMatrix new_capacity;   // [component][site]
    IndexMatrix new_grid;       // [component][edge], includes unmodelled-edge expansions added by callers
    IndexTensor production;     // [component][site][t]
    IndexTensor imports;        // [product][site][t]
    IndexTensor flow_pos;       // [component][edge][t], transshipment
    IndexTensor flow_neg;       // [component][edge][t], transshipment
    IndexTensor flow;           // [component][edge][t], DC
    IndexTensor angle;          // [product][angle key][t]
    IndexMatrix system_balance; // [product][t] row index or -1
    esm::Tensor3 fixed_exports; // copy of ModelSpec::fixed_exports
    std::optional<esm::Matrix> fixed_new_production;
    std::optional<esm::Matrix> fixed_new_grid;
    // Internal-loss estimate of aggregated models: coefficient and variable per [product][site][t].
    esm::Matrix loss_coefficient;
    IndexTensor loss_base;

    // Flow of component c on edge l at t from a primal vector (0 if unmodelled).
    double flow_value(const std::vector<double>& x, int c, int l, int t) const;
};

// One site per node, one line per edge, one angle per node.
SiteLayout nodal_layout(const esm::Instance& instance, const std::vector<int>& nodes);

// Spec with per-node parameters copied from the instance for the given layout.
ModelSpec nodal_spec(const esm::Instance& instance, SiteLayout layout);

// Variable and row names share one vocabulary so keys stay readable.
std::string key(const std::string& family, std::initializer_list<std::string> parts);

SystemModel build_system_model(const esm::Instance& instance, const ModelSpec& spec);

} // namespace sparta::lp
