#include "sparta/esm/instance.hpp"

#include <numeric>

namespace sparta::esm {

double Product::secured_system() const
{
    return std::accumulate(secured_capacity_nodal.begin(), secured_capacity_nodal.end(), 0.0);
}

int Component::carried_product() const
{
    if (!is_grid())
        return -1;
    for (std::size_t b = 0; b < ratio.size(); ++b)
        if (ratio[b] != 0.0)
            return static_cast<int>(b);
    return -1;
}

double Component::loss_factor(double length) const
{
    if (!is_grid() || mode == TransportMode::DcLoadFlow)
        return 0.0;
    return (1.0 - efficiency) * length;
}

int Topology::sigma(int edge, int node) const
{
    const Edge& e = edges[edge];
    if (e.from == node)
        return 1;
    if (e.to == node)
        return -1;
    return 0;
}

std::vector<std::vector<int>> Topology::incidence() const
{
    std::vector<std::vector<int>> out(nodes.size());
    for (std::size_t l = 0; l < edges.size(); ++l) {
        out[edges[l].from].push_back(static_cast<int>(l));
        out[edges[l].to].push_back(static_cast<int>(l));
    }
    return out;
}

double TemporalStructure::total_weight() const
{
    double sum = 0.0;
    for (const TimeStep& t : time_steps)
        sum += t.weight;
    return sum;
}

namespace {

template <typename Container>
int find_id(const Container& items, const std::string& id)
{
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i].id == id)
            return static_cast<int>(i);
    return -1;
}

} // namespace

int Instance::product_index(const std::string& id) const { return find_id(products, id); }
int Instance::component_index(const std::string& id) const { return find_id(components, id); }
int Instance::node_index(const std::string& id) const { return find_id(topology.nodes, id); }
int Instance::edge_index(const std::string& id) const { return find_id(topology.edges, id); }

double Instance::existing_total(int component, int location) const
{
    const Series& years = existing_capacity[component][location];
    return std::accumulate(years.begin(), years.end(), 0.0);
}

std::vector<int> Instance::production_components() const
{
    std::vector<int> out;
    for (std::size_t c = 0; c < components.size(); ++c)
        if (components[c].is_production())
            out.push_back(static_cast<int>(c));
    return out;
}

std::vector<int> Instance::grid_components() const
{
    std::vector<int> out;
    for (std::size_t c = 0; c < components.size(); ++c)
        if (components[c].is_grid())
            out.push_back(static_cast<int>(c));
    return out;
}

std::vector<int> Instance::grid_components_for(int product) const
{
    std::vector<int> out;
    for (std::size_t c = 0; c < components.size(); ++c)
        if (components[c].is_grid() && components[c].carried_product() == product)
            out.push_back(static_cast<int>(c));
    return out;
}

void allocate_series(Instance& instance)
{
    const std::size_t nb = instance.num_products();
    const std::size_t nn = instance.num_nodes();
    const std::size_t ne = instance.num_edges();
    const std::size_t nt = instance.num_time_steps();
    const std::size_t ny = instance.temporal.num_years() > 0 ? instance.temporal.num_years() - 1 : 0;

    instance.demand.assign(nb, Matrix(nn, Series(nt, 0.0)));
    instance.availability.assign(instance.num_components(), Matrix());
    instance.existing_capacity.assign(instance.num_components(), Matrix());
    for (std::size_t c = 0; c < instance.num_components(); ++c) {
        const Component& comp = instance.components[c];
        if (comp.is_production()) {
            instance.availability[c].assign(nn, Series(nt, 1.0));
            instance.existing_capacity[c].assign(nn, Series(ny, 0.0));
        } else {
            instance.existing_capacity[c].assign(ne, Series(ny, 0.0));
        }
    }
}

} // namespace sparta::esm
