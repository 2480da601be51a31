#include "sparta/bounds/diagnostics.hpp"

#include <algorithm>

namespace sparta::bounds {

using nlohmann::json;

namespace {

// Existing internal transport capacity of an edge for a product, in product units.
double internal_capacity(const esm::Instance& in, int product, int edge)
{
    double cap = 0.0;
    for (int c : in.grid_components_for(product))
        cap += in.components[c].ratio[product] * in.existing_total(c, edge);
    return cap;
}

json gap_table(const esm::Instance& in, const BoundModel& bound, int b, const std::vector<int>& nodes)
{
    json rows = json::array();
    for (int n : nodes)
        rows.push_back({{"node", in.topology.nodes[n].id},
                        {"delta", bound.gaps.delta[b][n]},
                        {"lambda", bound.gaps.lambda[b][n]}});
    return rows;
}

} // namespace

json bound_diagnostics(const esm::Instance& in, const BoundModel& bound, const BoundSolution* solution)
{
    const cluster::ClusterAssignment& asg = bound.aggregated.assignment;
    const bool upper = bound.kind == BoundKind::Upper;
    const bool solved = solution && solution->optimal();

    json clusters = json::array();
    for (int a = 0; a < asg.k(); ++a) {
        json doc;
        doc["cluster"] = bound.model.layout.sites[a].name;
        json nodes = json::array();
        for (int n : asg.clusters[a])
            nodes.push_back(in.topology.nodes[n].id);
        doc["nodes"] = nodes;

        json peaks = json::object();
        for (std::size_t b = 0; b < in.num_products(); ++b) {
            const esm::Series& d = bound.aggregated.demand[b][a];
            peaks[in.products[b].id] = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
        }
        doc["demand_peak"] = peaks;

        if (upper) {
            json losses = json::object();
            json forced = json::array();
            for (std::size_t bi = 0; bi < in.num_products(); ++bi) {
                const int b = static_cast<int>(bi);
                if (!bound.loss_factor.empty())
                    losses[in.products[b].id] = bound.loss_factor[b][a];
                if (!solved || bound.max_flow.empty() || bound.max_flow[b][a].empty() ||
                    bound.max_flow[b][a].front() < 0)
                    continue;
                double peak = 0.0;
                for (const double v : solution->peak_flow[b][a])
                    peak = std::max(peak, v);
                for (int l : asg.internal_edges[a]) {
                    const double existing = internal_capacity(in, b, l);
                    forced.push_back({{"product", in.products[b].id},
                                      {"edge", in.topology.edges[l].id},
                                      {"peak_flow", peak},
                                      {"existing", existing},
                                      {"expansion", forced_internal_expansion(peak, existing)}});
                }
            }
            doc["loss_factor"] = losses;
            doc["forced_internal_expansion"] = forced;
        }

        json gaps = json::object();
        if (!bound.gaps.delta.empty())
            for (std::size_t b = 0; b < in.num_products(); ++b)
                if (!in.products[b].transportable)
                    gaps[in.products[b].id] = gap_table(in, bound, static_cast<int>(b), asg.clusters[a]);
        doc["secured_gaps"] = gaps;
        clusters.push_back(std::move(doc));
    }

    json out;
    out["bound"] = to_string(bound.kind);
    out["k"] = asg.k();
    out["variables"] = bound.model.lp.num_variables();
    out["constraints"] = bound.model.lp.num_constraints();
    if (solution) {
        out["status"] = lp::to_string(solution->status);
        if (solution->optimal())
            out["tac"] = solution->tac;
    }
    out["clusters"] = std::move(clusters);
    return out;
}

} // namespace sparta::bounds
