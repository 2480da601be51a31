#include "sparta/driver/iteration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sparta/common/error.hpp"

namespace sparta::driver {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point start)
{
    return std::chrono::duration<double>(clock::now() - start).count();
}

} // namespace

void SpartaConfig::check() const
{
    if (!(epsilon_target > 0.0))
        throw ConfigurationError("epsilon target must be positive");
    if (initial_k < 2)
        throw ConfigurationError("initial cluster count must be at least 2");
    if (min_step < 1 || max_step < min_step)
        throw ConfigurationError("step bounds must satisfy 1 <= min_step <= max_step");
    if (fixed_step < 1)
        throw ConfigurationError("fixed step must be at least 1");
    if (max_iterations < 1)
        throw ConfigurationError("iteration limit must be at least 1");
}

void parse_step_rule(const std::string& text, SpartaConfig& config)
{
    if (text == "fast-forward") {
        config.step_rule = StepRule::FastForward;
        return;
    }
    const std::string prefix = "fixed:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            const int step = std::stoi(text.substr(prefix.size()), &used);
            if (used == text.size() - prefix.size() && step >= 1) {
                config.step_rule = StepRule::Fixed;
                config.fixed_step = step;
                return;
            }
        } catch (const std::exception&) {
        }
    }
    throw ConfigurationError("step rule must be 'fast-forward' or 'fixed:<n>' with n >= 1, got '" + text + "'");
}

double gap(double tac_lb, double tac_ub)
{
    if (!(tac_lb > 0.0))
        throw DomainError("relative gap undefined for a non-positive lower bound");
    return (tac_ub - tac_lb) / tac_lb;
}

int fast_forward_next_k(const BoundIterationRecord& previous, const BoundIterationRecord& latest,
                        double epsilon_target, int min_step, int max_step)
{
    const int k2 = latest.k_effective;
    const double dk = static_cast<double>(k2 - previous.k_effective);
    double best = std::numeric_limits<double>::infinity();
    if (dk != 0.0 && std::isfinite(latest.tac_ub) && std::isfinite(previous.tac_ub)) {
        const double g_lb = (latest.tac_lb - previous.tac_lb) / dk;
        const double g_ub = (latest.tac_ub - previous.tac_ub) / dk;
        const double mid = 0.5 * (latest.tac_lb + latest.tac_ub);
        const double half = 0.5 * epsilon_target * latest.tac_lb;
        // The lower bound must rise and the upper bound fall towards the band.
        if (g_lb > 0.0)
            best = std::min(best, k2 + (mid - half - latest.tac_lb) / g_lb);
        if (g_ub < 0.0)
            best = std::min(best, k2 + (mid + half - latest.tac_ub) / g_ub);
    }
    if (!std::isfinite(best))
        return k2 + min_step;
    const double step = std::ceil(best - 1e-9) - k2;
    return k2 + static_cast<int>(std::clamp(step, static_cast<double>(min_step), static_cast<double>(max_step)));
}

const char* to_string(Termination reason)
{
    switch (reason) {
    case Termination::Converged:
        return "converged";
    case Termination::FullResolution:
        return "full-resolution";
    case Termination::MaxIterations:
        return "max-iterations";
    }
    return "?";
}

IterationResult run_iterations(const esm::Instance& instance, const SpartaConfig& config)
{
    config.check();
    const auto start = clock::now();
    const int N = static_cast<int>(instance.num_nodes());
    const esm::Matrix features = cluster::node_features(instance, config.features);
    IterationResult out;
    int k = std::min(config.initial_k, N);

    for (int i = 0;; ++i) {
        BoundIterationRecord rec;
        rec.iteration = i;
        rec.k_requested = k;
        const auto t_cluster = clock::now();
        cluster::ClusterAssignment asg =
            cluster::cluster(features, instance.topology, k, config.method, config.seed, config.jobs);
        rec.wall_cluster = seconds_since(t_cluster);
        rec.k_effective = asg.k();

        bounds::BoundPair bp = bounds::solve_bounds(instance, asg, config.bound_options, config.solver, config.jobs);
        if (!bp.lb.optimal()) {
            if (bp.lb.status == lp::SolveStatus::Infeasible)
                throw InfeasibleError("relaxed problem is infeasible at k = " + std::to_string(rec.k_effective) +
                                      "; the instance has no feasible design");
            throw NumericError(std::string("lower bound solve ended with status ") + lp::to_string(bp.lb.status));
        }
        rec.tac_lb = bp.lb.tac;
        rec.wall_lb = bp.lb.wall_time;
        rec.wall_ub = bp.ub.wall_time;
        rec.ub_status = bp.ub.status;
        if (bp.ub.optimal()) {
            rec.tac_ub = bp.ub.tac;
            if (rec.tac_lb <= config.zero_tac)
                rec.epsilon = rec.tac_ub <= config.zero_tac ? 0.0 : std::numeric_limits<double>::infinity();
            else
                rec.epsilon = gap(rec.tac_lb, rec.tac_ub);
        } else {
            rec.tac_ub = std::numeric_limits<double>::infinity();
            rec.epsilon = std::numeric_limits<double>::infinity();
        }
        out.history.push_back(rec);
        out.assignment = std::move(asg);
        out.bounds = std::move(bp);

        if (rec.ub_feasible() && rec.epsilon <= config.epsilon_target) {
            out.termination = Termination::Converged;
            break;
        }
        if (rec.k_effective >= N) {
            if (!rec.ub_feasible())
                throw InfeasibleError("restricted problem is infeasible at full resolution");
            out.termination = Termination::FullResolution;
            break;
        }
        if (i + 1 >= config.max_iterations) {
            out.termination = Termination::MaxIterations;
            break;
        }

        int next = rec.k_effective + config.min_step;
        if (config.step_rule == StepRule::Fixed) {
            next = rec.k_effective + config.fixed_step;
        } else if (out.history.size() >= 2 && rec.ub_feasible()) {
            const BoundIterationRecord& prev = out.history[out.history.size() - 2];
            if (prev.ub_feasible())
                next = fast_forward_next_k(prev, rec, config.epsilon_target, config.min_step, config.max_step);
        }
        k = std::min(std::max(next, rec.k_effective + 1), N);
    }
    out.wall_time = seconds_since(start);
    return out;
}

} // namespace sparta::driver
