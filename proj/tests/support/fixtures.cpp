#include "fixtures.hpp"

#include <algorithm>
#include <tuple>

namespace sparta::testkit {

namespace {

esm::Product product(const std::string& id, std::size_t nodes, std::size_t steps)
{
    esm::Product p;
    p.id = id;
    p.import_cost.assign(steps, 0.0);
    p.secured_capacity_nodal.assign(nodes, 0.0);
    return p;
}

esm::Component generator(const std::string& id, std::size_t products, std::size_t years, double invest, double op,
                         std::size_t nodes)
{
    esm::Component c;
    c.id = id;
    c.ratio.assign(products, 0.0);
    c.ratio[0] = 1.0;
    c.invest_cost.assign(years, invest);
    c.op_cost = op;
    c.capacity_factor = 1.0;
    c.capacity_limit.assign(nodes, esm::kInfinity);
    return c;
}

esm::Component line(const std::string& id, std::size_t products, std::size_t years, std::size_t edges)
{
    esm::Component c;
    c.id = id;
    c.kind = esm::ComponentKind::Grid;
    c.ratio.assign(products, 0.0);
    c.ratio[0] = 1.0;
    c.invest_cost.assign(years, 1.0);
    c.capacity_limit.assign(edges, esm::kInfinity);
    return c;
}

} // namespace

esm::Instance single_node(double demand)
{
    esm::Instance in;
    in.products.push_back(product("el", 1, 1));
    in.components.push_back(generator("gen", 1, 1, 50.0, 0.1, 1));
    in.topology.nodes.push_back({"n1", 0.0, 0.0});
    in.temporal.time_steps.push_back({"t1", 8760.0, 8760.0});
    in.temporal.investment_years = {2030};
    esm::allocate_series(in);
    in.demand[0][0][0] = demand;
    return in;
}

esm::Instance dc_two_node()
{
    esm::Instance in;
    in.products.push_back(product("el", 2, 1));
    in.components.push_back(generator("gen", 1, 2, 50.0, 0.1, 2));
    in.components[0].capacity_limit[1] = 0.0;
    esm::Component dc = line("dc", 1, 2, 1);
    dc.mode = esm::TransportMode::DcLoadFlow;
    dc.susceptance = 1.0;
    dc.capacity_limit[0] = 5.0;
    in.components.push_back(dc);
    in.topology.nodes = {{"n1", 0.0, 0.0}, {"n2", 1.0, 0.0}};
    in.topology.edges = {{"l1", 0, 1, 1.0}};
    in.temporal.time_steps.push_back({"t1", 1.0, 1.0});
    in.temporal.investment_years = {2020, 2030};
    esm::allocate_series(in);
    in.existing_capacity[1][0][0] = 5.0;
    in.demand[0][1][0] = 4.0;
    return in;
}

esm::Instance transship_two_node(double line_capacity, double efficiency, double length)
{
    esm::Instance in;
    in.products.push_back(product("el", 2, 1));
    in.components.push_back(generator("cheap", 1, 2, 10.0, 0.01, 2));
    in.components[0].capacity_limit[1] = 0.0;
    in.components.push_back(generator("dear", 1, 2, 40.0, 0.05, 2));
    in.components[1].capacity_limit[0] = 0.0;
    esm::Component tl = line("tl", 1, 2, 1);
    tl.efficiency = efficiency;
    tl.capacity_limit[0] = line_capacity;
    in.components.push_back(tl);
    in.topology.nodes = {{"n1", 0.0, 0.0}, {"n2", length, 0.0}};
    in.topology.edges = {{"l1", 0, 1, length}};
    in.temporal.time_steps = {{"t1", 1.0, 4000.0}, {"t2", 1.0, 4000.0}};
    in.temporal.investment_years = {2020, 2030};
    esm::allocate_series(in);
    in.existing_capacity[2][0][0] = line_capacity;
    in.demand[0][0] = {2.0, 1.0};
    in.demand[0][1] = {6.0, 3.0};
    return in;
}

esm::Instance dc_triangle()
{
    esm::Instance in;
    in.products.push_back(product("el", 3, 1));
    in.components.push_back(generator("gen", 1, 2, 50.0, 0.1, 3));
    in.components[0].capacity_limit[1] = 0.0;
    in.components[0].capacity_limit[2] = 0.0;
    esm::Component dc = line("dc", 1, 2, 3);
    dc.mode = esm::TransportMode::DcLoadFlow;
    dc.susceptance = 1.0;
    dc.capacity_limit = {2.0, 2.0, esm::kInfinity};
    in.components.push_back(dc);
    in.topology.nodes = {{"n1", 0.0, 0.0}, {"n2", 1.0, 0.0}, {"n3", 1.0, 1.0}};
    in.topology.edges = {{"l12", 0, 1, 1.0}, {"l13", 0, 2, 1.0}, {"l23", 1, 2, 1.0}};
    in.temporal.time_steps.push_back({"t1", 1.0, 1.0});
    in.temporal.investment_years = {2020, 2030};
    esm::allocate_series(in);
    in.existing_capacity[1][0][0] = 2.0;
    in.existing_capacity[1][1][0] = 2.0;
    in.existing_capacity[1][2][0] = 0.5;
    in.demand[0][2][0] = 3.0;
    return in;
}

esm::Instance heat_node(double existing, double secured, double demand_peak)
{
    esm::Instance in;
    esm::Product heat;
    heat.id = "heat";
    heat.transportable = false;
    heat.import_cost = {0.0, 0.0};
    heat.secured_capacity_nodal = {secured};
    in.products.push_back(heat);
    for (const auto& [id, op, limit] : {std::tuple{"old", 0.01, existing}, std::tuple{"backup", 0.02, esm::kInfinity}}) {
        esm::Component c;
        c.id = id;
        c.ratio = {1.0};
        c.invest_cost = {100.0, 100.0};
        c.op_cost = op;
        c.capacity_factor = 1.0;
        c.capacity_limit = {limit};
        in.components.push_back(c);
    }
    in.topology.nodes = {{"n1", 0.0, 0.0}};
    in.temporal.time_steps = {{"t1", 1.0, 1.0}, {"t2", 1.0, 1.0}};
    in.temporal.investment_years = {2020, 2030};
    esm::allocate_series(in);
    for (auto& a : in.availability)
        for (auto& s : a)
            std::fill(s.begin(), s.end(), 1.0);
    in.existing_capacity[0][0][0] = existing;
    in.demand[0][0] = {demand_peak, demand_peak / 2};
    return in;
}

} // namespace sparta::testkit
