#include "sparta/decompose/subproblem.hpp"

#include <algorithm>
#include <cmath>

#include "sparta/esm/economics.hpp"

namespace sparta::decompose {

using lp::Relation;
using lp::Term;

ClusterSubproblem build_cluster_subproblem(const esm::Instance& in, const bounds::BoundModel& ub,
                                           const lp::SystemSolution& ub_solution, int a)
{
    const cluster::ClusterAssignment& asg = ub.aggregated.assignment;
    const std::size_t B = in.num_products(), C = in.num_components();
    const int T = static_cast<int>(in.num_time_steps());

    ClusterSubproblem sub;
    sub.cluster = a;
    sub.nodes = asg.clusters[a];
    sub.internal_edges = asg.internal_edges[a];
    const int S = static_cast<int>(sub.nodes.size());
    std::vector<int> site_of(in.num_nodes(), -1);
    for (int s = 0; s < S; ++s)
        site_of[sub.nodes[s]] = s;

    // External flows leave or enter at their endpoint node inside the cluster.
    sub.boundary_exports.assign(B, esm::Matrix(S, esm::Series(T, 0.0)));
    for (int l : asg.external_edges[a]) {
        const esm::Edge& e = in.topology.edges[l];
        const int sf = site_of[e.from], st = site_of[e.to];
        if (sf < 0 && st < 0)
            continue;
        for (std::size_t c = 0; c < C; ++c) {
            const esm::Component& comp = in.components[c];
            if (!comp.is_grid())
                continue;
            const int b = comp.carried_product();
            for (int t = 0; t < T; ++t) {
                const double f = comp.ratio[b] * ub_solution.flows[c][l][t];
                if (sf >= 0)
                    sub.boundary_exports[b][sf][t] += f;
                if (st >= 0)
                    sub.boundary_exports[b][st][t] -= f;
            }
        }
    }

    lp::ModelSpec spec = lp::nodal_spec(in, lp::nodal_layout(in, sub.nodes));
    spec.fixed_exports = sub.boundary_exports;
    spec.scope_nodes = sub.nodes;
    spec.scope_edges = sub.internal_edges;
    spec.system_secured = false;
    spec.system_limits = false;
    sub.model = lp::build_system_model(in, spec);
    lp::SystemModel& m = sub.model;

    sub.budget.assign(C, 0.0);
    for (int c : in.production_components()) {
        const double budget = std::max(0.0, ub_solution.capacity_expansion[c][a]);
        sub.budget[c] = budget;
        std::vector<Term> terms;
        for (int s = 0; s < S; ++s)
            if (m.new_capacity[c][s] >= 0)
                terms.push_back({m.new_capacity[c][s], 1.0});
        if (terms.empty() && budget == 0.0)
            continue;
        m.lp.add_constraint(lp::key("budget", {in.components[c].id}), std::move(terms), Relation::Equal, budget);
    }

    // System imports are split by the clusters' upper-bound usage.
    for (std::size_t bi = 0; bi < B; ++bi)
        for (int t = 0; t < T; ++t) {
            std::vector<Term> terms;
            for (int s = 0; s < S; ++s)
                if (m.imports[bi][s][t] >= 0)
                    terms.push_back({m.imports[bi][s][t], 1.0});
            if (terms.empty())
                continue;
            m.lp.add_constraint(lp::key("impcap", {in.products[bi].id, in.temporal.time_steps[t].id}), std::move(terms),
                                Relation::LessEqual, std::max(0.0, ub_solution.site_imports[bi][a][t]));
        }

    sub.ghg_budget = esm::kInfinity;
    const int ghg_row = m.lp.find_constraint("ghg");
    if (std::isfinite(in.ghg_limit)) {
        sub.ghg_budget = ub_solution.site_ghg[a];
        if (ghg_row >= 0)
            m.lp.set_rhs(ghg_row, sub.ghg_budget);
    }

    // Loss allowance: the upper bound's cluster surplus minus its internal
    // loss charge; summed over clusters it covers the external losses.
    for (std::size_t bi = 0; bi < B; ++bi) {
        const int b = static_cast<int>(bi);
        for (int t = 0; t < T; ++t) {
            const int row = m.system_balance[b][t];
            if (row < 0)
                continue;
            double supply = ub_solution.site_imports[b][a][t];
            for (int c : in.production_components())
                supply += in.components[c].ratio[b] * ub_solution.production[c][a][t];
            const double surplus =
                supply - ub.aggregated.demand[b][a][t] - ub_solution.exports[b][a][t];
            const double allowance = surplus - ub_solution.internal_loss[b][a][t];
            m.lp.set_rhs(row, m.lp.constraint(row).rhs + allowance);
        }
    }
    return sub;
}

} // namespace sparta::decompose
