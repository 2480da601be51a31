#include "sparta/decompose/redesign.hpp"

#include <chrono>
#include <exception>
#include <sstream>

#include "sparta/common/error.hpp"
#include "sparta/common/parallel.hpp"
#include "sparta/esm/economics.hpp"

namespace sparta::decompose {

namespace {

using clock = std::chrono::steady_clock;

ClusterRedesign solve_cluster(const esm::Instance& in, const bounds::BoundModel& ub,
                              const lp::SystemSolution& ub_solution, int a, const lp::SolverOptions& solver)
{
    const auto start = clock::now();
    const ClusterSubproblem sub = build_cluster_subproblem(in, ub, ub_solution, a);
    const lp::SolveResult r = lp::solve(sub.model.lp, solver);
    ClusterRedesign out;
    out.cluster = a;
    out.status = r.status;
    out.iterations = r.iteration_count;
    out.ghg_budget = sub.ghg_budget;
    if (r.optimal()) {
        out.solution = lp::extract_solution(in, sub.model, r);
        out.tac = out.solution.tac;
        out.ghg = out.solution.ghg;
        for (int l : sub.internal_edges)
            for (int c : in.grid_components())
                out.internal_expansion += out.solution.grid_expansion[c][l];
    }
    out.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

RedesignResult combine(const esm::Instance& in, const bounds::BoundModel& ub, const lp::SystemSolution& ub_solution,
                       std::vector<ClusterRedesign> clusters)
{
    const cluster::ClusterAssignment& asg = ub.aggregated.assignment;
    std::ostringstream failures;
    for (const ClusterRedesign& r : clusters)
        if (r.status != lp::SolveStatus::Optimal)
            failures << " " << ub.model.layout.sites[r.cluster].name << " (" << lp::to_string(r.status) << ")";
    if (!failures.str().empty())
        throw InfeasibleError("cluster redesign failed for" + failures.str());

    RedesignResult out;
    FullDesign& d = out.design;
    const std::size_t C = in.num_components();
    d.new_production.assign(C, esm::Series(in.num_nodes(), 0.0));
    d.new_grid.assign(C, esm::Series(in.num_edges(), 0.0));
    d.node_cluster = asg.cluster_of;
    d.edge_cluster.assign(in.num_edges(), -1);
    for (const ClusterRedesign& r : clusters) {
        const std::vector<int>& nodes = asg.clusters[r.cluster];
        for (int c : in.production_components())
            for (std::size_t s = 0; s < nodes.size(); ++s)
                d.new_production[c][nodes[s]] = r.solution.capacity_expansion[c][s];
        for (int l : asg.internal_edges[r.cluster]) {
            d.edge_cluster[l] = r.cluster;
            for (int c : in.grid_components())
                d.new_grid[c][l] = r.solution.grid_expansion[c][l];
        }
        out.tac += r.tac;
    }
    const std::size_t cur = in.temporal.current_year_index();
    for (std::size_t l = 0; l < in.num_edges(); ++l) {
        if (d.edge_cluster[l] >= 0)
            continue;
        for (int c : in.grid_components()) {
            d.new_grid[c][l] = ub_solution.grid_expansion[c][l];
            out.external_grid_capex += esm::existing_capex(in, c, static_cast<int>(l)) + esm::annualized_invest(in, c, cur) *
                                                                           in.topology.edges[l].length *
                                                                           d.new_grid[c][l];
        }
    }
    out.tac += out.external_grid_capex;
    out.clusters = std::move(clusters);
    return out;
}

} // namespace

RedesignResult redesign_all(const esm::Instance& instance, const bounds::BoundModel& ub,
                            const lp::SystemSolution& ub_solution, const lp::SolverOptions& solver, int jobs)
{
    const auto start = clock::now();
    const int K = ub.aggregated.assignment.k();
    std::vector<ClusterRedesign> clusters(K);
    std::vector<std::exception_ptr> errors(K);
#pragma omp parallel for num_threads(resolve_jobs(jobs)) schedule(dynamic, 1)
    for (int a = 0; a < K; ++a) {
        try {
            clusters[a] = solve_cluster(instance, ub, ub_solution, a, solver);
        } catch (...) {
            errors[a] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
    RedesignResult out = combine(instance, ub, ub_solution, std::move(clusters));
    out.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

RedesignResult redesign_all_serial(const esm::Instance& instance, const bounds::BoundModel& ub,
                                   const lp::SystemSolution& ub_solution, const lp::SolverOptions& solver)
{
    const auto start = clock::now();
    std::vector<ClusterRedesign> clusters;
    for (int a = 0; a < ub.aggregated.assignment.k(); ++a)
        clusters.push_back(solve_cluster(instance, ub, ub_solution, a, solver));
    RedesignResult out = combine(instance, ub, ub_solution, std::move(clusters));
    out.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

} // namespace sparta::decompose
