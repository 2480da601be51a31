#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sparta::esm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kMaxAnnualHours = 8784.0;

using Series = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;
using Tensor3 = std::vector<Matrix>;

enum class ComponentKind { Production, Grid };
enum class TransportMode { Transshipment, DcLoadFlow };

struct Product {
    std::string id;
    bool transportable = true;
    Series import_cost;                 // per time step
    bool import_allowed = false;
    Series secured_capacity_nodal;      // per node, 0 when absent
    std::optional<double> secured_capacity_system;

    // System-wide secured capacity, derived from the nodal entries.
    double secured_system() const;
};

struct Component {
    std::string id;
    ComponentKind kind = ComponentKind::Production;
    Series ratio;                       // per product, 0 when absent
    Series invest_cost;                 // per investment year
    double op_cost = 0.0;
    double op_emission = 0.0;
    int lifetime = 1;
    int discount_period = 1;
    double capacity_factor = 0.0;
    // Production: per node. Grid: per edge. Includes existing capacity.
    Series capacity_limit;
    double system_capacity_limit = kInfinity;
    double efficiency = 1.0;            // grid only, retained fraction per unit length
    double susceptance = 1.0;           // grid only, DC load flow
    TransportMode mode = TransportMode::Transshipment;

    bool is_production() const { return kind == ComponentKind::Production; }
    bool is_grid() const { return kind == ComponentKind::Grid; }
    bool is_dc() const { return is_grid() && mode == TransportMode::DcLoadFlow; }
    // Index of the single product a grid component carries, or -1.
    int carried_product() const;
    // Loss factor (1 - eta) * length for one line of this component.
    double loss_factor(double length) const;
};

struct Node {
    std::string id;
    double x = 0.0;
    double y = 0.0;
};

struct Edge {
    std::string id;
    int from = -1;
    int to = -1;
    double length = 1.0;
};

struct Topology {
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_edges() const { return edges.size(); }
    // Incidence sign of edge l at node n: +1 at the origin, -1 at the target.
    int sigma(int edge, int node) const;
    // Edge indices incident to each node.
    std::vector<std::vector<int>> incidence() const;
};

struct TimeStep {
    std::string id;
    double duration = 1.0;
    double weight = 1.0;
};

struct TemporalStructure {
    std::vector<TimeStep> time_steps;
    std::vector<int> investment_years;  // the last entry is the current year

    std::size_t num_time_steps() const { return time_steps.size(); }
    std::size_t num_years() const { return investment_years.size(); }
    std::size_t current_year_index() const { return investment_years.size() - 1; }
    double total_weight() const;
};

struct Instance {
    std::vector<Product> products;
    std::vector<Component> components;
    Topology topology;
    TemporalStructure temporal;
    Tensor3 demand;             // [product][node][t]
    Tensor3 availability;       // [component][node][t], empty for grid components
    Tensor3 existing_capacity;  // [component][node or edge][previous year]
    double ghg_limit = kInfinity;
    double interest_rate = 0.0;

    std::size_t num_products() const { return products.size(); }
    std::size_t num_components() const { return components.size(); }
    std::size_t num_nodes() const { return topology.num_nodes(); }
    std::size_t num_edges() const { return topology.num_edges(); }
    std::size_t num_time_steps() const { return temporal.num_time_steps(); }

    int product_index(const std::string& id) const;
    int component_index(const std::string& id) const;
    int node_index(const std::string& id) const;
    int edge_index(const std::string& id) const;

    // Sum of existing capacity over all previous investment years.
    double existing_total(int component, int location) const;
    std::vector<int> production_components() const;
    std::vector<int> grid_components() const;
    std::vector<int> grid_components_for(int product) const;
    double weight(int t) const { return temporal.time_steps[t].weight; }
};

// Allocates every dense series of an instance with zeros given its index sets.
void allocate_series(Instance& instance);

} // namespace sparta::esm
