#include "sparta/decompose/fixed_design.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "sparta/common/error.hpp"

namespace sparta::decompose {

namespace {

using clock = std::chrono::steady_clock;

lp::ModelSpec full_spec(const esm::Instance& in)
{
    std::vector<int> nodes(in.num_nodes());
    for (std::size_t n = 0; n < nodes.size(); ++n)
        nodes[n] = static_cast<int>(n);
    return lp::nodal_spec(in, lp::nodal_layout(in, nodes));
}

DesignEvaluation evaluate(const esm::Instance& in, const lp::ModelSpec& spec, const lp::SolverOptions& solver)
{
    const auto start = clock::now();
    const lp::SystemModel model = lp::build_system_model(in, spec);
    const lp::SolveResult r = lp::solve(model.lp, solver);
    DesignEvaluation out;
    out.status = r.status;
    if (r.optimal()) {
        out.solution = lp::extract_solution(in, model, r);
        out.tac = out.solution.tac;
    }
    out.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

// Clusters whose fixed local supply plus the largest possible boundary
// inflow cannot reach their demand at some time step.
std::string cut_set_diagnosis(const esm::Instance& in, const FullDesign& design)
{
    int K = 0;
    for (int a : design.node_cluster)
        K = std::max(K, a + 1);
    std::ostringstream out;
    for (int a = 0; a < K; ++a)
        for (std::size_t bi = 0; bi < in.num_products(); ++bi) {
            const int b = static_cast<int>(bi);
            const esm::Product& p = in.products[b];
            if (!p.transportable || p.import_allowed)
                continue;
            double boundary = 0.0;
            for (std::size_t l = 0; l < in.num_edges(); ++l) {
                const esm::Edge& e = in.topology.edges[l];
                if ((design.node_cluster[e.from] == a) == (design.node_cluster[e.to] == a))
                    continue;
                for (int c : in.grid_components_for(b))
                    boundary += in.components[c].ratio[b] * in.components[c].capacity_limit[l];
            }
            for (std::size_t t = 0; t < in.num_time_steps(); ++t) {
                double need = 0.0, supply = 0.0;
                for (std::size_t n = 0; n < in.num_nodes(); ++n) {
                    if (design.node_cluster[n] != a)
                        continue;
                    need += in.demand[b][n][t];
                    for (int c : in.production_components()) {
                        const double theta = in.components[c].ratio[b];
                        if (theta > 0.0)
                            supply += theta * in.availability[c][n][t] *
                                      (in.existing_total(c, static_cast<int>(n)) + design.new_production[c][n]);
                    }
                }
                if (need - supply > boundary + 1e-9) {
                    out << " A" << a + 1 << " (" << p.id << ", " << in.temporal.time_steps[t].id << ")";
                    break;
                }
            }
        }
    return out.str();
}

} // namespace

DesignEvaluation operational_check(const esm::Instance& instance, const FullDesign& design,
                                   const lp::SolverOptions& solver)
{
    lp::ModelSpec spec = full_spec(instance);
    spec.fixed_new_production = design.new_production;
    spec.fixed_new_grid = design.new_grid;
    return evaluate(instance, spec, solver);
}

DesignEvaluation network_optimization(const esm::Instance& instance, const FullDesign& design,
                                      const lp::SolverOptions& solver)
{
    lp::ModelSpec spec = full_spec(instance);
    spec.fixed_new_production = design.new_production;
    DesignEvaluation out = evaluate(instance, spec, solver);
    if (out.status == lp::SolveStatus::Infeasible) {
        const std::string cut = cut_set_diagnosis(instance, design);
        throw InfeasibleError("network optimization infeasible: grid expansion limits are insufficient" +
                              (cut.empty() ? std::string("; no single cluster boundary identified")
                                           : "; boundary capacity lacking at" + cut));
    }
    if (!out.optimal())
        throw NumericError(std::string("network optimization ended with status ") + lp::to_string(out.status));
    return out;
}

} // namespace sparta::decompose
