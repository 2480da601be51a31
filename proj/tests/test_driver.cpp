#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sparta/app/generator.hpp"
#include "sparta/common/error.hpp"
#include "sparta/driver/convergence_log.hpp"
#include "sparta/driver/iteration.hpp"
#include "support/fixtures.hpp"

using namespace sparta;
using driver::BoundIterationRecord;

namespace {

BoundIterationRecord record(int k, double lb, double ub)
{
    BoundIterationRecord r;
    r.k_requested = k;
    r.k_effective = k;
    r.tac_lb = lb;
    r.tac_ub = ub;
    r.epsilon = (ub - lb) / lb;
    return r;
}

esm::Instance generated(std::uint64_t seed, int nodes, esm::TransportMode mode = esm::TransportMode::Transshipment)
{
    app::GeneratorSpec g;
    g.seed = seed;
    g.n_nodes = nodes;
    g.n_time_steps = 6;
    g.transport_mode = mode;
    return app::generate_instance(g);
}

} // namespace

TEST(Gap, TabulatedExamples)
{
    EXPECT_NEAR(driver::gap(100.0, 104.0), 0.04, 1e-12);
    EXPECT_EQ(driver::gap(100.0, 100.0), 0.0);
    EXPECT_NEAR(driver::gap(96.0, 116.0), 20.0 / 96.0, 1e-12);
}

TEST(Gap, NonPositiveLowerBoundIsDomainError)
{
    EXPECT_THROW(driver::gap(0.0, 1.0), DomainError);
    EXPECT_THROW(driver::gap(-1.0, 1.0), DomainError);
}

TEST(FastForward, WorkedExampleGivesTwentySix)
{
    const int k = driver::fast_forward_next_k(record(10, 90.0, 130.0), record(20, 96.0, 116.0), 0.05, 1,
                                              std::numeric_limits<int>::max());
    EXPECT_EQ(k, 26);
}

TEST(FastForward, FlatSlopesAdvanceByMinStep)
{
    EXPECT_EQ(driver::fast_forward_next_k(record(4, 90.0, 130.0), record(6, 90.0, 130.0), 0.05, 3, 100), 9);
}

TEST(FastForward, WrongSlopeSignsFallBack)
{
    // Bounds drift apart: neither extrapolation reaches the band ahead.
    EXPECT_EQ(driver::fast_forward_next_k(record(4, 95.0, 120.0), record(6, 90.0, 130.0), 0.05, 2, 100), 8);
}

TEST(FastForward, StepIsClamped)
{
    // Candidate 26 lies 6 ahead of k = 20.
    EXPECT_EQ(driver::fast_forward_next_k(record(10, 90.0, 130.0), record(20, 96.0, 116.0), 0.05, 8, 100), 28);
    EXPECT_EQ(driver::fast_forward_next_k(record(10, 90.0, 130.0), record(20, 96.0, 116.0), 0.05, 1, 3), 23);
}

TEST(Config, StepRuleParsing)
{
    driver::SpartaConfig cfg;
    driver::parse_step_rule("fixed:3", cfg);
    EXPECT_EQ(cfg.step_rule, driver::StepRule::Fixed);
    EXPECT_EQ(cfg.fixed_step, 3);
    driver::parse_step_rule("fast-forward", cfg);
    EXPECT_EQ(cfg.step_rule, driver::StepRule::FastForward);
    EXPECT_THROW(driver::parse_step_rule("fixed:0", cfg), ConfigurationError);
    EXPECT_THROW(driver::parse_step_rule("fixed:x", cfg), ConfigurationError);
    EXPECT_THROW(driver::parse_step_rule("bisect", cfg), ConfigurationError);
}

TEST(Config, RangeChecks)
{
    driver::SpartaConfig cfg;
    EXPECT_NO_THROW(cfg.check());
    cfg.epsilon_target = 0.0;
    EXPECT_THROW(cfg.check(), ConfigurationError);
    cfg = {};
    cfg.initial_k = 1;
    EXPECT_THROW(cfg.check(), ConfigurationError);
    cfg = {};
    cfg.min_step = 3;
    cfg.max_step = 2;
    EXPECT_THROW(cfg.check(), ConfigurationError);
}

TEST(RunIterations, SingletonStartConvergesInOneIteration)
{
    const esm::Instance in = generated(11, 8);
    driver::SpartaConfig cfg;
    cfg.initial_k = 8;
    const driver::IterationResult r = driver::run_iterations(in, cfg);
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.final_record().k_effective, 8);
    EXPECT_LE(r.final_record().epsilon, 1e-6);
    EXPECT_EQ(r.termination, driver::Termination::Converged);
}

TEST(RunIterations, ZeroDemandConvergesWithZeroGap)
{
    esm::Instance in = testkit::single_node(0.0);
    const driver::IterationResult r = driver::run_iterations(in, {});
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.final_record().tac_lb, 0.0);
    EXPECT_EQ(r.final_record().tac_ub, 0.0);
    EXPECT_EQ(r.final_record().epsilon, 0.0);
    EXPECT_EQ(r.termination, driver::Termination::Converged);
}

TEST(RunIterations, RecordsMatchIndependentBoundSolves)
{
    const esm::Instance in = generated(12, 12);
    driver::SpartaConfig cfg;
    const driver::IterationResult r = driver::run_iterations(in, cfg);
    ASSERT_FALSE(r.history.empty());
    const auto features = cluster::node_features(in, cfg.features);
    int previous_k = 0;
    for (const BoundIterationRecord& rec : r.history) {
        EXPECT_GE(rec.k_effective, rec.k_requested);
        EXPECT_GT(rec.k_effective, previous_k);
        previous_k = rec.k_effective;
        const auto asg = cluster::cluster(features, in.topology, rec.k_requested, cfg.method, cfg.seed, 1);
        const auto bp = bounds::solve_bounds(in, asg, cfg.bound_options, cfg.solver, 1);
        ASSERT_TRUE(bp.lb.optimal());
        EXPECT_NEAR(rec.tac_lb, bp.lb.tac, 1e-9 * bp.lb.tac);
        if (rec.ub_feasible()) {
            ASSERT_TRUE(bp.ub.optimal());
            EXPECT_NEAR(rec.tac_ub, bp.ub.tac, 1e-9 * bp.ub.tac);
            EXPECT_EQ(rec.epsilon, driver::gap(rec.tac_lb, rec.tac_ub));
            EXPECT_GE(rec.tac_ub, rec.tac_lb * (1.0 - 1e-9));
        } else {
            EXPECT_TRUE(std::isinf(rec.epsilon));
        }
    }
    if (r.termination == driver::Termination::Converged)
        EXPECT_LE(r.final_record().epsilon, cfg.epsilon_target);
}

TEST(RunIterations, FixedStepAndMaxIterations)
{
    const esm::Instance in = generated(13, 10);
    driver::SpartaConfig cfg;
    cfg.epsilon_target = 1e-9;
    cfg.step_rule = driver::StepRule::Fixed;
    cfg.fixed_step = 2;
    cfg.max_iterations = 2;
    const driver::IterationResult r = driver::run_iterations(in, cfg);
    ASSERT_EQ(r.history.size(), 2u);
    EXPECT_EQ(r.history[1].k_requested, r.history[0].k_effective + 2);
    EXPECT_EQ(r.termination, driver::Termination::MaxIterations);
}

TEST(RunIterations, TinyTargetEndsAtFullResolution)
{
    const esm::Instance in = generated(14, 8);
    driver::SpartaConfig cfg;
    cfg.epsilon_target = 1e-12;
    const driver::IterationResult r = driver::run_iterations(in, cfg);
    EXPECT_EQ(r.final_record().k_effective, 8);
    EXPECT_TRUE(r.termination == driver::Termination::FullResolution ||
                r.termination == driver::Termination::Converged);
    EXPECT_LE(r.final_record().epsilon, 1e-6);
}

TEST(RunIterations, UnreachableDemandIsInfeasible)
{
    esm::Instance in = testkit::single_node(10.0);
    in.components[0].capacity_limit[0] = 5.0;
    EXPECT_THROW(driver::run_iterations(in, {}), InfeasibleError);
}

TEST(ConvergenceLog, HeaderAndInfinity)
{
    BoundIterationRecord a = record(2, 100.0, 104.0);
    BoundIterationRecord b = record(3, 100.0, 0.0);
    b.iteration = 1;
    b.tac_ub = std::numeric_limits<double>::infinity();
    b.epsilon = std::numeric_limits<double>::infinity();
    const std::string log = driver::convergence_log({a, b});
    std::istringstream lines(log);
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    EXPECT_EQ(header, "iter,k_requested,k_effective,tac_lb,tac_ub,epsilon,wall_lb_s,wall_ub_s");
    EXPECT_EQ(row1.substr(0, 8), "0,2,2,10");
    EXPECT_NE(row2.find(",inf,inf,"), std::string::npos);
}
