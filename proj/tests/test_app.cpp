#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sparta/app/generator.hpp"
#include "sparta/app/pipeline.hpp"
#include "sparta/app/report_io.hpp"
#include "sparta/cluster/assignment.hpp"
#include "sparta/common/error.hpp"
#include "sparta/driver/convergence_log.hpp"
#include "sparta/esm/instance_io.hpp"
#include "sparta/esm/validation.hpp"
#include "sparta/lp/solution_io.hpp"
#include "support/fixtures.hpp"

using namespace sparta;

namespace {

app::GeneratorSpec spec12(std::uint64_t seed, esm::TransportMode mode = esm::TransportMode::Transshipment)
{
    app::GeneratorSpec g;
    g.seed = seed;
    g.transport_mode = mode;
    return g;
}

double tolerance(double v) { return 1e-6 * (1.0 + std::abs(v)); }

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("sparta_test_" + name);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST(Generator, SameSpecGivesIdenticalDocument)
{
    const auto g = spec12(5);
    EXPECT_EQ(esm::dump_instance(app::generate_instance(g)), esm::dump_instance(app::generate_instance(g)));
    EXPECT_NE(esm::dump_instance(app::generate_instance(g)), esm::dump_instance(app::generate_instance(spec12(6))));
}

TEST(Generator, EdgeCountConnectivityAndValidity)
{
    for (auto mode : {esm::TransportMode::Transshipment, esm::TransportMode::DcLoadFlow}) {
        const esm::Instance in = app::generate_instance(spec12(7, mode));
        EXPECT_EQ(in.num_nodes(), 12u);
        EXPECT_EQ(in.num_edges(), 18u);
        const auto whole = cluster::make_assignment(std::vector<int>(12, 0), in.topology);
        EXPECT_EQ(cluster::split_disconnected(whole, in.topology).k(), 1);
        EXPECT_TRUE(esm::validate_instance(in).ok()) << esm::validate_instance(in).to_string();
        bool non_transportable = false;
        for (const auto& p : in.products)
            non_transportable |= !p.transportable;
        EXPECT_TRUE(non_transportable);
    }
}

TEST(Generator, RejectsOutOfRangeSpecs)
{
    auto g = spec12(1);
    g.n_nodes = 0;
    EXPECT_THROW(app::generate_instance(g), ConfigurationError);
    g = spec12(1);
    g.n_components = 9;
    EXPECT_THROW(app::generate_instance(g), ConfigurationError);
}

TEST(SolveFull, SingleNodeExample)
{
    const app::FullSolve f = app::solve_full(testkit::single_node(10.0));
    ASSERT_TRUE(f.optimal());
    EXPECT_NEAR(f.solution.tac, 9260.0, 1e-6);
    EXPECT_NEAR(f.solution.capacity_expansion[0][0], 10.0, 1e-9);
}

TEST(SolveFull, ZeroDemandCostsNothing)
{
    const app::FullSolve f = app::solve_full(testkit::single_node(0.0));
    ASSERT_TRUE(f.optimal());
    EXPECT_EQ(f.solution.tac, 0.0);
}

TEST(SolveFull, ZeroEmissionCapWithFossilSupplyIsInfeasible)
{
    esm::Instance in = testkit::single_node(10.0);
    in.components[0].op_emission = 1.0;
    in.ghg_limit = 0.0;
    EXPECT_EQ(app::solve_full(in).status, lp::SolveStatus::Infeasible);
}

TEST(Pipeline, ImprovementChainAndBenchmark)
{
    for (auto mode : {esm::TransportMode::Transshipment, esm::TransportMode::DcLoadFlow}) {
        const esm::Instance in = app::generate_instance(spec12(8, mode));
        const app::RunArtifacts run = app::run_pipeline(in, {});
        const app::ComparisonReport& r = run.report;
        ASSERT_TRUE(r.tac_full.has_value());
        EXPECT_LE(r.tac_lb, *r.tac_full + tolerance(*r.tac_full));
        EXPECT_LE(*r.tac_full, r.tac_final + tolerance(r.tac_final));
        EXPECT_LE(r.tac_final, r.tac_redesign + tolerance(r.tac_redesign));
        EXPECT_LE(r.tac_redesign, r.tac_ub + tolerance(r.tac_ub));
        EXPECT_LE(r.epsilon_final, 0.05);
        EXPECT_LE(r.epsilon_final, r.epsilon_ub + 1e-12);
        EXPECT_EQ(r.epsilon_ub, (r.tac_ub - r.tac_lb) / r.tac_lb);
        EXPECT_EQ(r.epsilon_final, (r.tac_final - r.tac_lb) / r.tac_lb);
        EXPECT_LE(run.final_solution.ghg, in.ghg_limit + tolerance(in.ghg_limit));
        if (mode == esm::TransportMode::Transshipment)
            EXPECT_TRUE(r.operational_feasible);
        EXPECT_EQ(r.clusters.size(), static_cast<std::size_t>(r.k_final));
    }
}

TEST(Pipeline, NoBenchmarkOmitsFullSolve)
{
    const esm::Instance in = app::generate_instance(spec12(9));
    app::RunOptions opts;
    opts.benchmark = false;
    const app::RunArtifacts run = app::run_pipeline(in, opts);
    EXPECT_FALSE(run.full.has_value());
    EXPECT_FALSE(run.report.tac_full.has_value());
    EXPECT_FALSE(run.report.epsilon_full.has_value());
    EXPECT_FALSE(run.report.speedup.has_value());
    EXPECT_GT(run.report.tac_lb, 0.0);
    EXPECT_LE(run.report.epsilon_final, 0.05);
}

TEST(Pipeline, ForcedNetworkOptimizationOnlyImproves)
{
    const esm::Instance in = app::generate_instance(spec12(10));
    app::RunOptions opts;
    opts.benchmark = false;
    opts.force_network_opt = true;
    const app::RunArtifacts run = app::run_pipeline(in, opts);
    ASSERT_TRUE(run.report.tac_network.has_value());
    EXPECT_TRUE(run.report.network_optimized);
    EXPECT_LE(run.report.tac_final, run.report.tac_redesign + tolerance(run.report.tac_redesign));
    EXPECT_EQ(run.report.tac_final, *run.report.tac_network);
}

TEST(Pipeline, DeterministicAcrossRuns)
{
    const esm::Instance in = app::generate_instance(spec12(11));
    app::RunOptions opts;
    opts.benchmark = false;
    const app::ComparisonReport a = app::run_pipeline(in, opts).report;
    const app::ComparisonReport b = app::run_pipeline(in, opts).report;
    EXPECT_NEAR(a.tac_lb, b.tac_lb, 1e-9);
    EXPECT_NEAR(a.tac_ub, b.tac_ub, 1e-9);
    EXPECT_NEAR(a.tac_redesign, b.tac_redesign, 1e-9);
    EXPECT_NEAR(a.tac_final, b.tac_final, 1e-9);
    EXPECT_EQ(a.k_final, b.k_final);
}

TEST(Pipeline, InvalidInstanceIsValidationError)
{
    esm::Instance in = testkit::single_node(10.0);
    in.demand[0][0][0] = -1.0;
    EXPECT_THROW(app::run_pipeline(in, {}), ValidationError);
}

TEST(Artifacts, ReportSolutionAndInstanceRoundTrip)
{
    const esm::Instance in = app::generate_instance(spec12(12));
    const app::RunArtifacts run = app::run_pipeline(in, {});
    const auto dir = scratch_dir("artifacts");

    app::write_report_file((dir / "report.json").string(), run.report);
    const app::ComparisonReport back = app::read_report_file((dir / "report.json").string());
    EXPECT_EQ(app::report_to_json(back), app::report_to_json(run.report));

    lp::write_solution_file((dir / "solution.json").string(), in, run.final_solution);
    const lp::SystemSolution sol = lp::read_solution_file((dir / "solution.json").string(), in);
    EXPECT_EQ(lp::solution_to_json(in, sol), lp::solution_to_json(in, run.final_solution));

    esm::write_instance_file((dir / "instance.json").string(), in);
    EXPECT_EQ(esm::dump_instance(esm::read_instance_file((dir / "instance.json").string())), esm::dump_instance(in));

    driver::write_convergence_log_file((dir / "convergence.csv").string(), run.iterations.history);
    std::ifstream log(dir / "convergence.csv");
    std::string line;
    int rows = -1;
    while (std::getline(log, line))
        ++rows;
    EXPECT_EQ(rows, static_cast<int>(run.iterations.history.size()));
    std::filesystem::remove_all(dir);
}

TEST(Artifacts, MalformedReportIsFormatError)
{
    EXPECT_THROW(app::report_from_json(nlohmann::json{{"schema", "other"}}), FormatError);
    EXPECT_THROW(app::report_from_json(nlohmann::json::array()), FormatError);
}

TEST(ExitCodes, ErrorFamiliesMapToCodes)
{
    EXPECT_EQ(exit_code_for(ValidationError("x")), kExitValidation);
    EXPECT_EQ(exit_code_for(InfeasibleError("x")), kExitInfeasible);
    EXPECT_EQ(exit_code_for(NumericError("x")), kExitNumeric);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitFailure);
}
