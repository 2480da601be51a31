// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "sparta/app/generator.hpp"
#include "sparta/bounds/bound_models.hpp"
#include "sparta/cluster/distance.hpp"
#include "sparta/cluster/features.hpp"
#include "sparta/cluster/methods.hpp"
#include "sparta/decompose/redesign.hpp"

using namespace sparta;

namespace {

esm::Matrix random_features(int rows, int cols)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    esm::Matrix m(rows, esm::Series(cols));
    for (auto& row : m)
        for (double& v : row)
            v = u(rng);
    return m;
}

void BM_DistancesSerial(benchmark::State& state)
{
    const esm::Matrix f = random_features(static_cast<int>(state.range(0)), 64);
    for (auto _ : state)
        benchmark::DoNotOptimize(cluster::pairwise_distances_serial(f));
}

void BM_DistancesParallel(benchmark::State& state)
{
    const esm::Matrix f = random_features(static_cast<int>(state.range(0)), 64);
    for (auto _ : state)
        benchmark::DoNotOptimize(cluster::pairwise_distances(f, 0));
}

void BM_KMeansSerial(benchmark::State& state)
{
    const esm::Matrix f = random_features(static_cast<int>(state.range(0)), 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(cluster::kmeans_serial(f, 8, 1));
}

void BM_KMeansParallel(benchmark::State& state)
{
    const esm::Matrix f = random_features(static_cast<int>(state.range(0)), 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(cluster::kmeans(f, 8, 1, 0));
}

struct RedesignInput {
    esm::Instance instance;
    bounds::BoundPair bounds;
};

const RedesignInput& redesign_input()
{
    static const RedesignInput input = [] {
        app::GeneratorSpec g;
        g.seed = 3;
        g.n_nodes = 16;
        RedesignInput r{app::generate_instance(g), {}};
        const auto asg = cluster::cluster(cluster::node_features(r.instance, {}), r.instance.topology, 6,
                                          cluster::Method::KMedoids, 1, 1);
        r.bounds = bounds::solve_bounds(r.instance, asg, {}, {}, 1);
        return r;
    }();
    return input;
}

void BM_RedesignSerial(benchmark::State& state)
{
    const RedesignInput& r = redesign_input();
    if (!r.bounds.ub.optimal()) {
        state.SkipWithError("upper bound infeasible");
        return;
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(decompose::redesign_all_serial(r.instance, r.bounds.ub_model, r.bounds.ub.solution));
}

void BM_RedesignParallel(benchmark::State& state)
{
    const RedesignInput& r = redesign_input();
    if (!r.bounds.ub.optimal()) {
        state.SkipWithError("upper bound infeasible");
        return;
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(decompose::redesign_all(r.instance, r.bounds.ub_model, r.bounds.ub.solution, {}, 0));
}

} // namespace

BENCHMARK(BM_DistancesSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_DistancesParallel)->Arg(128)->Arg(512);
BENCHMARK(BM_KMeansSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_KMeansParallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_RedesignSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RedesignParallel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
