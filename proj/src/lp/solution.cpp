#include "sparta/lp/solution.hpp"

#include <cmath>
#include <sstream>

#include "sparta/common/error.hpp"
#include "sparta/esm/economics.hpp"

namespace sparta::lp {

double emissions_of(const esm::Instance& instance, const esm::Tensor3& production)
{
    double sum = 0.0;
    for (std::size_t c = 0; c < production.size(); ++c) {
        const double k = instance.components[c].op_emission;
        if (k == 0.0)
            continue;
        for (const esm::Series& site : production[c])
            for (std::size_t t = 0; t < site.size(); ++t)
                sum += k * instance.weight(static_cast<int>(t)) * site[t];
    }
    return sum;
}

SystemSolution extract_solution(const esm::Instance& in, const SystemModel& model, const SolveResult& result)
{
    if (!result.optimal())
        throw Error("cannot extract a solution from a non-optimal solve");
    const std::vector<double>& x = result.primal_values;
    const int S = static_cast<int>(model.layout.sites.size());
    const int T = static_cast<int>(in.num_time_steps());
    const int C = static_cast<int>(in.num_components());
    const int B = static_cast<int>(in.num_products());
    const int E = static_cast<int>(in.num_edges());
    const std::size_t cur = in.temporal.current_year_index();
    auto value = [&](int var) { return var >= 0 ? x[var] : 0.0; };

    SystemSolution sol;
    sol.objective_value = result.objective_value;
    for (const Site& s : model.layout.sites) {
        sol.sites.push_back(s.name);
        sol.site_nodes.push_back(s.nodes);
    }
    sol.edge_modelled.assign(E, false);
    for (const Line& line : model.layout.lines)
        sol.edge_modelled[line.edge] = true;

    sol.capacity_expansion.assign(C, esm::Series(S, 0.0));
    sol.grid_expansion.assign(C, esm::Series(E, 0.0));
    sol.production.assign(C, esm::Matrix(S, esm::Series(T, 0.0)));
    sol.flows.assign(C, esm::Matrix(E, esm::Series(T, 0.0)));
    sol.angles.assign(C, esm::Matrix(E, esm::Series(T, 0.0)));
    sol.site_imports.assign(B, esm::Matrix(S, esm::Series(T, 0.0)));
    sol.imports.assign(B, esm::Series(T, 0.0));
    sol.exports.assign(B, esm::Matrix(S, esm::Series(T, 0.0)));
    sol.internal_loss.assign(B, esm::Matrix(S, esm::Series(T, 0.0)));
    sol.site_ghg.assign(S, 0.0);

    for (int c = 0; c < C; ++c) {
        const esm::Component& comp = in.components[c];
        if (comp.is_production()) {
            for (int s = 0; s < S; ++s) {
                sol.capacity_expansion[c][s] = model.fixed_new_production ? (*model.fixed_new_production)[c][s]
                                                                           : value(model.new_capacity[c][s]);
                for (int t = 0; t < T; ++t)
                    sol.production[c][s][t] = value(model.production[c][s][t]);
            }
        } else {
            for (int l = 0; l < E; ++l) {
                if (model.fixed_new_grid && sol.edge_modelled[l])
                    sol.grid_expansion[c][l] = (*model.fixed_new_grid)[c][l];
                else
                    sol.grid_expansion[c][l] = value(model.new_grid[c][l]);
                for (int t = 0; t < T; ++t)
                    sol.flows[c][l][t] = model.flow_value(x, c, l, t);
            }
        }
    }
    for (int b = 0; b < B; ++b)
        for (int s = 0; s < S; ++s)
            for (int t = 0; t < T; ++t) {
                sol.site_imports[b][s][t] = value(model.imports[b][s][t]);
                sol.imports[b][t] += sol.site_imports[b][s][t];
                if (!model.fixed_exports.empty())
                    sol.exports[b][s][t] = model.fixed_exports[b][s][t];
                if (!model.loss_base.empty() && !model.loss_base[b].empty() && model.loss_base[b][s][t] >= 0)
                    sol.internal_loss[b][s][t] = model.loss_coefficient[b][s] * x[model.loss_base[b][s][t]];
            }
    for (const Line& line : model.layout.lines) {
        const int l = line.edge;
        for (int c = 0; c < C; ++c) {
            const esm::Component& comp = in.components[c];
            if (!comp.is_grid())
                continue;
            const int b = comp.carried_product();
            for (int t = 0; t < T; ++t) {
                const double f = comp.ratio[b] * sol.flows[c][l][t];
                sol.exports[b][line.from_site][t] += f;
                sol.exports[b][line.to_site][t] -= f;
                if (comp.is_dc()) {
                    const int af = model.angle[b][line.from_angle][t];
                    const int at = model.angle[b][line.to_angle][t];
                    sol.angles[c][l][t] = value(af) - value(at);
                }
            }
        }
    }

    // Cost terms recomputed from the design and schedule.
    for (int c = 0; c < C; ++c) {
        const esm::Component& comp = in.components[c];
        const double ann = esm::annualized_invest(in, c, cur);
        if (comp.is_production()) {
            for (int n : model.scope_nodes)
                sol.capex_prod += esm::existing_capex(in, c, n);
            for (int s = 0; s < S; ++s) {
                sol.capex_prod += ann * sol.capacity_expansion[c][s];
                double site_emission = 0.0;
                for (int t = 0; t < T; ++t) {
                    sol.opex += comp.op_cost * in.weight(t) * sol.production[c][s][t];
                    site_emission += comp.op_emission * in.weight(t) * sol.production[c][s][t];
                }
                sol.site_ghg[s] += site_emission;
                sol.ghg += site_emission;
            }
        } else {
            for (int l : model.scope_edges)
                sol.capex_grid += esm::existing_capex(in, c, l);
            for (int l = 0; l < E; ++l)
                sol.capex_grid += ann * in.topology.edges[l].length * sol.grid_expansion[c][l];
        }
    }
    for (int b = 0; b < B; ++b)
        for (int t = 0; t < T; ++t)
            sol.opex += in.products[b].import_cost[t] * in.weight(t) * sol.imports[b][t];
    sol.tac = sol.capex_prod + sol.capex_grid + sol.opex;

    if (std::abs(sol.tac - result.objective_value) > 1e-7 * (1.0 + std::abs(sol.tac))) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "recomputed TAC " << sol.tac << " disagrees with solver objective " << result.objective_value;
        throw SolutionMismatchError(msg.str());
    }
    return sol;
}

} // namespace sparta::lp
