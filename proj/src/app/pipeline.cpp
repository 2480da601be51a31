#include "sparta/app/pipeline.hpp"

#include <chrono>
#include <limits>

#include "sparta/common/error.hpp"
#include "sparta/esm/validation.hpp"
#include "sparta/lp/full_model.hpp"

namespace sparta::app {

namespace {

using clock = std::chrono::steady_clock;

// Runs fn and prefixes the message of any library error with the phase name,
// keeping the error type for the exit code.
template <typename Fn>
auto in_phase(const std::string& phase, Fn&& fn) -> decltype(fn())
{
    const auto relabel = [&](const std::exception& e) { return phase + ": " + e.what(); };
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(relabel(e));
    } catch (const InfeasibleError& e) {
        throw InfeasibleError(relabel(e));
    } catch (const NumericError& e) {
        throw NumericError(relabel(e));
    } catch (const SolutionMismatchError& e) {
        throw SolutionMismatchError(relabel(e));
    } catch (const ConfigurationError& e) {
        throw ConfigurationError(relabel(e));
    } catch (const DomainError& e) {
        throw DomainError(relabel(e));
    } catch (const SizeLimitError& e) {
        throw SizeLimitError(relabel(e));
    } catch (const Error& e) {
        throw Error(relabel(e));
    }
}

} // namespace

FullSolve solve_full(const esm::Instance& instance, const lp::SolverOptions& solver)
{
    const auto start = clock::now();
    const lp::SystemModel model = lp::build_full_lp(instance);
    const lp::SolveResult r = lp::solve(model.lp, solver);
    FullSolve out;
    out.status = r.status;
    out.iterations = r.iteration_count;
    out.variables = model.lp.num_variables();
    out.constraints = model.lp.num_constraints();
    if (r.optimal())
        out.solution = lp::extract_solution(instance, model, r);
    out.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

double relative_to_lower(double tac_lb, double tac, double zero_tac)
{
    if (tac_lb <= zero_tac)
        return tac <= zero_tac ? 0.0 : std::numeric_limits<double>::infinity();
    return driver::gap(tac_lb, tac);
}

RunArtifacts run_pipeline(const esm::Instance& instance, const RunOptions& options)
{
    const driver::SpartaConfig& cfg = options.config;
    const esm::ValidationReport validation = esm::validate_instance(instance);
    if (!validation.ok())
        throw ValidationError("instance: " + validation.to_string());

    RunArtifacts out;
    const auto start = clock::now();
    out.iterations = in_phase("iterations", [&] { return driver::run_iterations(instance, cfg); });
    const driver::BoundIterationRecord& last = out.iterations.final_record();
    const bounds::BoundPair& bp = out.iterations.bounds;
    if (!bp.ub.optimal())
        throw InfeasibleError("iterations: no feasible upper bound within " + std::to_string(cfg.max_iterations) +
                              " iterations");

    out.redesign = in_phase("redesign", [&] {
        return decompose::redesign_all(instance, bp.ub_model, bp.ub.solution, cfg.solver, cfg.jobs);
    });
    out.operational = in_phase("operational check",
                               [&] { return decompose::operational_check(instance, out.redesign.design, cfg.solver); });
    if (!out.operational.optimal() || options.force_network_opt)
        out.network = in_phase("network optimization", [&] {
            return decompose::network_optimization(instance, out.redesign.design, cfg.solver);
        });
    out.final_solution = out.network ? out.network->solution : out.operational.solution;
    const double wall_sparta = std::chrono::duration<double>(clock::now() - start).count();

    if (options.benchmark)
        out.full = in_phase("benchmark", [&] { return solve_full(instance, cfg.solver); });

    ComparisonReport& rep = out.report;
    rep.tac_lb = last.tac_lb;
    rep.tac_ub = last.tac_ub;
    rep.tac_redesign = out.redesign.tac;
    if (out.operational.optimal())
        rep.tac_operational = out.operational.tac;
    if (out.network)
        rep.tac_network = out.network->tac;
    rep.tac_final = out.final_solution.tac;
    rep.epsilon_ub = relative_to_lower(rep.tac_lb, rep.tac_ub, cfg.zero_tac);
    rep.epsilon_redesign = relative_to_lower(rep.tac_lb, rep.tac_redesign, cfg.zero_tac);
    rep.epsilon_final = relative_to_lower(rep.tac_lb, rep.tac_final, cfg.zero_tac);
    rep.iterations = static_cast<int>(out.iterations.history.size());
    rep.k_final = last.k_effective;
    rep.termination = driver::to_string(out.iterations.termination);
    rep.operational_feasible = out.operational.optimal();
    rep.network_optimized = out.network.has_value();
    rep.wall_iterations = out.iterations.wall_time;
    rep.wall_redesign = out.redesign.wall_time;
    rep.wall_operational = out.operational.wall_time;
    rep.wall_network = out.network ? out.network->wall_time : 0.0;
    rep.wall_sparta = wall_sparta;
    if (out.full && out.full->optimal()) {
        rep.tac_full = out.full->solution.tac;
        rep.epsilon_full = relative_to_lower(*rep.tac_full, rep.tac_final, cfg.zero_tac);
        rep.wall_full = out.full->wall_time;
        if (wall_sparta > 0.0)
            rep.speedup = out.full->wall_time / wall_sparta;
    }
    for (const decompose::ClusterRedesign& c : out.redesign.clusters) {
        ClusterReport cr;
        cr.cluster = bp.ub_model.model.layout.sites[c.cluster].name;
        cr.nodes = out.iterations.assignment.cardinality(c.cluster);
        cr.tac = c.tac;
        cr.ghg = c.ghg;
        cr.ghg_budget = c.ghg_budget;
        cr.internal_expansion = c.internal_expansion;
        rep.clusters.push_back(cr);
    }
    return out;
}

} // namespace sparta::app
