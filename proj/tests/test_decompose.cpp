#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sparta/app/generator.hpp"
#include "sparta/bounds/bound_models.hpp"
#include "sparta/cluster/features.hpp"
#include "sparta/cluster/methods.hpp"
#include "sparta/common/error.hpp"
#include "sparta/decompose/fixed_design.hpp"
#include "sparta/decompose/redesign.hpp"
#include "sparta/decompose/subproblem.hpp"
#include "sparta/lp/full_model.hpp"
#include "support/fixtures.hpp"

using namespace sparta;

namespace {

esm::Instance generated(std::uint64_t seed, int nodes, esm::TransportMode mode = esm::TransportMode::Transshipment)
{
    app::GeneratorSpec g;
    g.seed = seed;
    g.n_nodes = nodes;
    g.n_time_steps = 6;
    g.transport_mode = mode;
    return app::generate_instance(g);
}

bounds::BoundPair bounds_for(const esm::Instance& in, const cluster::ClusterAssignment& asg)
{
    bounds::BoundPair bp = bounds::solve_bounds(in, asg, {}, {}, 1);
    EXPECT_TRUE(bp.ub.optimal());
    return bp;
}

cluster::ClusterAssignment kmedoids(const esm::Instance& in, int k)
{
    return cluster::cluster(cluster::node_features(in, {}), in.topology, k, cluster::Method::KMedoids, 1, 1);
}

struct Bounded {
    cluster::ClusterAssignment asg;
    bounds::BoundPair bp;
};

// Coarsest k-medoids clustering from k upwards whose upper bound is feasible.
Bounded feasible_bounds(const esm::Instance& in, int k)
{
    for (;; ++k) {
        Bounded out{kmedoids(in, k), {}};
        out.bp = bounds::solve_bounds(in, out.asg, {}, {}, 1);
        if (out.bp.ub.optimal() || k >= static_cast<int>(in.num_nodes()))
            return out;
    }
}

double tolerance(double v) { return 1e-6 * (1.0 + std::abs(v)); }

// Two nodes sharing an ample line, each with demand 5 and a producer capped at 6.
esm::Instance two_node_caps()
{
    esm::Instance in = testkit::transship_two_node(20.0, 1.0, 1.0);
    in.components.erase(in.components.begin() + 1);
    in.existing_capacity.erase(in.existing_capacity.begin() + 1);
    in.availability.erase(in.availability.begin() + 1);
    in.components[0].capacity_limit = {6.0, 6.0};
    in.demand[0][0] = {5.0, 5.0};
    in.demand[0][1] = {5.0, 5.0};
    return in;
}

decompose::FullDesign empty_design(const esm::Instance& in)
{
    decompose::FullDesign d;
    d.new_production.assign(in.num_components(), esm::Series(in.num_nodes(), 0.0));
    d.new_grid.assign(in.num_components(), esm::Series(in.num_edges(), 0.0));
    d.node_cluster.assign(in.num_nodes(), 0);
    d.edge_cluster.assign(in.num_edges(), 0);
    return d;
}

} // namespace

TEST(Subproblem, BudgetRedistributedWithinNodalCaps)
{
    const esm::Instance in = two_node_caps();
    const auto asg = cluster::make_assignment({0, 0}, in.topology);
    const auto bp = bounds_for(in, asg);
    ASSERT_NEAR(bp.ub.solution.capacity_expansion[0][0], 10.0, 1e-7);
    const auto sub = decompose::build_cluster_subproblem(in, bp.ub_model, bp.ub.solution, 0);
    EXPECT_DOUBLE_EQ(sub.budget[0], bp.ub.solution.capacity_expansion[0][0]);
    const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
    const auto& p = r.design.new_production[0];
    EXPECT_LE(p[0], 6.0 + 1e-7);
    EXPECT_LE(p[1], 6.0 + 1e-7);
    EXPECT_NEAR(p[0] + p[1], 10.0, 1e-7);
}

TEST(Subproblem, ZeroDemandZeroBudgetGivesZeroSolution)
{
    const esm::Instance in = testkit::single_node(0.0);
    const auto asg = cluster::make_assignment({0}, in.topology);
    const auto bp = bounds_for(in, asg);
    const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
    ASSERT_EQ(r.clusters.size(), 1u);
    EXPECT_EQ(r.clusters[0].tac, 0.0);
    EXPECT_EQ(r.design.new_production[0][0], 0.0);
    for (double v : r.clusters[0].solution.production[0][0])
        EXPECT_EQ(v, 0.0);
}

TEST(Redesign, SingletonClusteringReproducesUpperBoundDesign)
{
    const esm::Instance in = generated(21, 8);
    std::vector<int> labels(8);
    std::iota(labels.begin(), labels.end(), 0);
    const auto asg = cluster::make_assignment(labels, in.topology);
    const auto bp = bounds_for(in, asg);
    const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
    for (int c : in.production_components())
        for (int a = 0; a < asg.k(); ++a)
            EXPECT_NEAR(r.design.new_production[c][asg.clusters[a][0]], bp.ub.solution.capacity_expansion[c][a],
                        1e-7);
    EXPECT_NEAR(r.tac, bp.ub.tac, tolerance(bp.ub.tac));
}

TEST(Redesign, ClusterCostsStayBelowUpperBoundAndBudgetsHold)
{
    for (std::uint64_t seed : {31u, 32u, 33u}) {
        const esm::Instance in = generated(seed, 10);
        const auto [asg, bp] = feasible_bounds(in, 3);
        ASSERT_TRUE(bp.ub.optimal());
        const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
        EXPECT_LE(r.tac, bp.ub.tac + tolerance(bp.ub.tac)) << "seed " << seed;
        double ghg_budgets = 0.0;
        for (const auto& cr : r.clusters) {
            ghg_budgets += cr.ghg_budget;
            EXPECT_LE(cr.ghg, cr.ghg_budget + tolerance(cr.ghg_budget));
        }
        EXPECT_LE(ghg_budgets, in.ghg_limit + tolerance(in.ghg_limit));
        for (int c : in.production_components())
            for (int a = 0; a < asg.k(); ++a) {
                double sum = 0.0;
                for (int n : asg.clusters[a])
                    sum += r.design.new_production[c][n];
                const double budget = bp.ub.solution.capacity_expansion[c][a];
                EXPECT_NEAR(sum, budget, 1e-7 * std::max(1.0, budget)) << "seed " << seed;
            }
    }
}

TEST(Redesign, ParallelMatchesSerial)
{
    const esm::Instance in = generated(34, 12);
    const auto [asg, bp] = feasible_bounds(in, 4);
    ASSERT_TRUE(bp.ub.optimal());
    const auto par = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 0);
    const auto ser = decompose::redesign_all_serial(in, bp.ub_model, bp.ub.solution, {});
    EXPECT_EQ(par.tac, ser.tac);
    EXPECT_EQ(par.design.new_production, ser.design.new_production);
    EXPECT_EQ(par.design.new_grid, ser.design.new_grid);
}

TEST(FixedDesign, TransshipmentDesignsAreOperationallyFeasible)
{
    for (std::uint64_t seed : {41u, 42u, 43u, 44u}) {
        const esm::Instance in = generated(seed, 10);
        const auto [asg, bp] = feasible_bounds(in, 3);
        ASSERT_TRUE(bp.ub.optimal());
        const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
        const auto op = decompose::operational_check(in, r.design);
        ASSERT_TRUE(op.optimal()) << "seed " << seed;
        EXPECT_LE(op.tac, r.tac + tolerance(r.tac));
        EXPECT_GE(op.tac, bp.lb.tac - tolerance(bp.lb.tac));
        EXPECT_LE(op.solution.ghg, in.ghg_limit + tolerance(in.ghg_limit));
        const auto net = decompose::network_optimization(in, r.design);
        ASSERT_TRUE(net.optimal());
        EXPECT_LE(net.tac, op.tac + tolerance(op.tac));
        EXPECT_GE(net.tac, bp.lb.tac - tolerance(bp.lb.tac));
    }
}

TEST(FixedDesign, ZeroCapacityWithDemandIsInfeasible)
{
    const esm::Instance in = testkit::single_node(10.0);
    EXPECT_EQ(decompose::operational_check(in, empty_design(in)).status, lp::SolveStatus::Infeasible);
}

TEST(FixedDesign, UncongestedNetworkKeepsCost)
{
    const esm::Instance in = testkit::transship_two_node(20.0, 1.0, 1.0);
    decompose::FullDesign d = empty_design(in);
    d.new_production[0][0] = 8.0;
    const auto op = decompose::operational_check(in, d);
    const auto net = decompose::network_optimization(in, d);
    ASSERT_TRUE(op.optimal());
    ASSERT_TRUE(net.optimal());
    EXPECT_NEAR(net.tac, op.tac, tolerance(op.tac));
    EXPECT_EQ(net.solution.grid_expansion[2][0], 0.0);
}

TEST(FixedDesign, PhaseAngleCongestionNeedsNetworkOptimization)
{
    const esm::Instance in = testkit::dc_triangle();
    decompose::FullDesign d = empty_design(in);
    d.new_production[0][0] = 3.0;
    d.node_cluster = {0, 1, 1};
    d.edge_cluster = {-1, -1, 1};
    // Cluster {n2, n3} alone could route 2 + 1 over the boundary lines, but
    // the full network forces 1 unit over l23, which only carries 0.5.
    EXPECT_EQ(decompose::operational_check(in, d).status, lp::SolveStatus::Infeasible);
    const auto net = decompose::network_optimization(in, d);
    ASSERT_TRUE(net.optimal());
    EXPECT_NEAR(net.solution.grid_expansion[1][2], 0.5, 1e-7);
    EXPECT_NEAR(net.solution.grid_expansion[1][0], 0.0, 1e-9);
    EXPECT_NEAR(net.solution.flows[1][2][0], 1.0, 1e-7);
    d.new_grid = net.solution.grid_expansion;
    EXPECT_TRUE(decompose::operational_check(in, d).optimal());
}

TEST(FixedDesign, InsufficientInternalLimitIsInfeasible)
{
    esm::Instance in = testkit::dc_triangle();
    in.components[1].capacity_limit[2] = 0.5;
    decompose::FullDesign d = empty_design(in);
    d.new_production[0][0] = 3.0;
    d.node_cluster = {0, 1, 1};
    d.edge_cluster = {-1, -1, 1};
    EXPECT_THROW(decompose::network_optimization(in, d), InfeasibleError);
}

TEST(FixedDesign, InsufficientBoundaryNamesTheCluster)
{
    esm::Instance in = testkit::dc_triangle();
    in.components[1].capacity_limit = {1.0, 1.0, esm::kInfinity};
    in.existing_capacity[1][0][0] = 1.0;
    in.existing_capacity[1][1][0] = 1.0;
    decompose::FullDesign d = empty_design(in);
    d.new_production[0][0] = 3.0;
    d.node_cluster = {0, 1, 1};
    d.edge_cluster = {-1, -1, 1};
    try {
        decompose::network_optimization(in, d);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError& e) {
        EXPECT_NE(std::string(e.what()).find("A2 (el, t1)"), std::string::npos) << e.what();
    }
}

TEST(FixedDesign, DcDesignsAreFeasibleAfterNetworkOptimization)
{
    for (std::uint64_t seed : {51u, 52u, 53u}) {
        const esm::Instance in = generated(seed, 10, esm::TransportMode::DcLoadFlow);
        const auto [asg, bp] = feasible_bounds(in, 3);
        ASSERT_TRUE(bp.ub.optimal());
        const auto r = decompose::redesign_all(in, bp.ub_model, bp.ub.solution, {}, 1);
        const auto op = decompose::operational_check(in, r.design);
        if (op.optimal())
            continue;
        const auto net = decompose::network_optimization(in, r.design);
        EXPECT_TRUE(net.optimal()) << "seed " << seed;
    }
}
