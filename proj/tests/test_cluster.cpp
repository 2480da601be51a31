#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "sparta/app/generator.hpp"
#include "sparta/cluster/assignment.hpp"
#include "sparta/cluster/distance.hpp"
#include "sparta/cluster/features.hpp"
#include "sparta/cluster/methods.hpp"
#include "sparta/common/error.hpp"
#include "support/fixtures.hpp"

using namespace sparta;
using cluster::Method;

namespace {

esm::Topology path_graph(int n)
{
    esm::Topology t;
    for (int i = 0; i < n; ++i)
        t.nodes.push_back({"n" + std::to_string(i + 1), static_cast<double>(i), 0.0});
    for (int i = 0; i + 1 < n; ++i)
        t.edges.push_back({"l" + std::to_string(i + 1), i, i + 1, 1.0});
    return t;
}

std::set<std::set<int>> as_sets(const cluster::ClusterAssignment& a)
{
    std::set<std::set<int>> out;
    for (const auto& c : a.clusters)
        out.insert(std::set<int>(c.begin(), c.end()));
    return out;
}

// Exhaustive 2-partition minimizing the within-cluster sum of squares.
std::set<std::set<int>> best_two_partition(const esm::Matrix& x)
{
    const int n = static_cast<int>(x.size());
    double best = std::numeric_limits<double>::infinity();
    std::set<std::set<int>> arg;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        double sse = 0.0;
        std::set<int> parts[2];
        for (int side = 0; side < 2; ++side) {
            esm::Series mean(x[0].size(), 0.0);
            int count = 0;
            for (int i = 0; i < n; ++i)
                if (((mask >> i) & 1) == side) {
                    parts[side].insert(i);
                    for (std::size_t j = 0; j < mean.size(); ++j)
                        mean[j] += x[i][j];
                    ++count;
                }
            for (double& m : mean)
                m /= count;
            for (int i : parts[side])
                sse += cluster::squared_distance(x[i], mean);
        }
        if (sse < best - 1e-12) {
            best = sse;
            arg = {parts[0], parts[1]};
        }
    }
    return arg;
}

esm::Instance random_instance(std::uint64_t seed, int nodes)
{
    app::GeneratorSpec g;
    g.seed = seed;
    g.n_nodes = nodes;
    g.n_time_steps = 4;
    g.density = 1.2 + 0.1 * static_cast<double>(seed % 5);
    return app::generate_instance(g);
}

} // namespace

TEST(Features, CoordinatesOnly)
{
    esm::Instance in = testkit::single_node(1.0);
    in.topology.nodes = {{"a", 0, 0}, {"b", 1, 0}, {"c", 0, 2}};
    esm::allocate_series(in);
    const esm::Matrix f = cluster::node_features(in);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0], (esm::Series{0, 0}));
    EXPECT_EQ(f[1], (esm::Series{1, 0}));
    EXPECT_EQ(f[2], (esm::Series{0, 2}));
}

TEST(Features, PopulationStandardization)
{
    esm::Matrix m{{0.0}, {2.0}};
    cluster::standardize_columns(m);
    EXPECT_DOUBLE_EQ(m[0][0], -1.0);
    EXPECT_DOUBLE_EQ(m[1][0], 1.0);
}

TEST(Features, DemandAugmentedShape)
{
    app::GeneratorSpec g;
    g.n_nodes = 5;
    g.n_products = 2;
    const esm::Instance in = app::generate_instance(g);
    cluster::FeatureOptions opt;
    opt.include_demand = true;
    const esm::Matrix f = cluster::node_features(in, opt);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(f[0].size(), 4u);
}

TEST(Distance, ParallelMatchesSerial)
{
    const esm::Instance in = random_instance(3, 40);
    const esm::Matrix f = cluster::node_features(in);
    const cluster::DistanceMatrix a = cluster::pairwise_distances_serial(f);
    for (int jobs : {1, 2, 4})
        EXPECT_EQ(cluster::pairwise_distances(f, jobs).data(), a.data());
}

TEST(Methods, ExtremeClusterCounts)
{
    const esm::Instance in = random_instance(5, 9);
    const esm::Matrix f = cluster::node_features(in);
    for (Method m : {Method::KMeans, Method::KMedoids, Method::Hierarchical}) {
        const auto all = cluster::cluster(f, in.topology, 9, m, 7);
        EXPECT_EQ(all.k(), 9) << to_string(m);
        const auto one = cluster::cluster(f, in.topology, 1, m, 7);
        EXPECT_EQ(one.k(), 1) << to_string(m);
        EXPECT_EQ(one.cardinality(0), 9);
    }
}

TEST(Methods, FourPointsTwoClusters)
{
    const esm::Matrix x{{0, 0}, {0, 1}, {10, 0}, {10, 1}};
    const std::set<std::set<int>> expected{{0, 1}, {2, 3}};
    ASSERT_EQ(best_two_partition(x), expected);
    const esm::Topology topo = path_graph(4);
    for (Method m : {Method::KMeans, Method::KMedoids, Method::Hierarchical})
        EXPECT_EQ(as_sets(cluster::cluster(x, topo, 2, m, 1)), expected) << to_string(m);
}

TEST(Methods, KMeansMatchesExhaustiveTwoPartition)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        esm::Matrix x(8, esm::Series(2));
        for (auto& row : x)
            for (double& v : row)
                v = u(rng);
        const auto labels = cluster::cluster_labels(x, 2, Method::KMeans, trial);
        const auto r = cluster::kmeans(x, 2, trial);
        // Lloyd reaches a local optimum; ten starts should find the global one on 8 points.
        double best = 0.0;
        for (const auto& part : best_two_partition(x)) {
            esm::Series mean(2, 0.0);
            for (int i : part)
                for (int j = 0; j < 2; ++j)
                    mean[j] += x[i][j] / part.size();
            for (int i : part)
                best += cluster::squared_distance(x[i], mean);
        }
        EXPECT_NEAR(r.inertia, best, 1e-9 * (1 + best)) << trial;
        EXPECT_EQ(labels.size(), 8u);
    }
}

TEST(Methods, KMeansParallelMatchesSerial)
{
    const esm::Instance in = random_instance(9, 30);
    const esm::Matrix f = cluster::node_features(in);
    for (int k : {2, 5, 11}) {
        const auto s = cluster::kmeans_serial(f, k, 42);
        for (int jobs : {1, 3}) {
            const auto p = cluster::kmeans(f, k, 42, jobs);
            EXPECT_EQ(p.labels, s.labels);
            EXPECT_EQ(p.inertia, s.inertia);
            EXPECT_EQ(p.start, s.start);
        }
    }
}

TEST(Methods, DeterministicAndPartitioning)
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const esm::Instance in = random_instance(seed, 14);
        const esm::Matrix f = cluster::node_features(in);
        for (Method m : {Method::KMeans, Method::KMedoids, Method::Hierarchical})
            for (int k : {2, 5, 14}) {
                const auto a = cluster::cluster(f, in.topology, k, m, seed);
                const auto b = cluster::cluster(f, in.topology, k, m, seed);
                EXPECT_EQ(a.cluster_of, b.cluster_of);
                int total = 0;
                for (int c = 0; c < a.k(); ++c) {
                    total += a.cardinality(c);
                    for (int n : a.clusters[c])
                        EXPECT_EQ(a.cluster_of[n], c);
                }
                EXPECT_EQ(total, 14);
                EXPECT_LE(a.k(), k);
            }
    }
}

TEST(Methods, ClusterCountOutOfRange)
{
    const esm::Matrix x{{0, 0}, {1, 1}};
    for (Method m : {Method::KMeans, Method::KMedoids, Method::Hierarchical}) {
        EXPECT_THROW(cluster::cluster_labels(x, 0, m, 1), DomainError);
        EXPECT_THROW(cluster::cluster_labels(x, 3, m, 1), DomainError);
    }
    EXPECT_THROW(cluster::parse_method("spectral"), ConfigurationError);
}

TEST(Assignment, EdgeClassification)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const esm::Instance in = random_instance(seed, 12);
        const auto a = cluster::cluster(cluster::node_features(in), in.topology, 4, Method::KMedoids, seed);
        std::vector<int> internal_count(in.num_edges(), 0), external_count(in.num_edges(), 0);
        for (int c = 0; c < a.k(); ++c) {
            for (int l : a.internal_edges[c])
                ++internal_count[l];
            for (int l : a.external_edges[c])
                ++external_count[l];
        }
        for (std::size_t l = 0; l < in.num_edges(); ++l) {
            const esm::Edge& e = in.topology.edges[l];
            const bool same = a.cluster_of[e.from] == a.cluster_of[e.to];
            EXPECT_EQ(internal_count[l], same ? 1 : 0);
            EXPECT_EQ(external_count[l], same ? 0 : 2);
        }
    }
}

TEST(Split, NoInternalPath)
{
    const esm::Topology topo = path_graph(3);
    const auto a = cluster::make_assignment({0, 1, 0}, topo);
    const auto s = cluster::split_disconnected(a, topo);
    EXPECT_EQ(as_sets(s), (std::set<std::set<int>>{{0}, {1}, {2}}));
}

TEST(Split, ConnectedClusterUnchanged)
{
    const esm::Topology topo = path_graph(2);
    const auto a = cluster::make_assignment({0, 0}, topo);
    EXPECT_EQ(cluster::split_disconnected(a, topo).cluster_of, a.cluster_of);
}

TEST(Split, PathGraphComponents)
{
    const esm::Topology topo = path_graph(4);
    const auto a = cluster::make_assignment({0, 0, 1, 0}, topo);
    EXPECT_EQ(as_sets(cluster::split_disconnected(a, topo)), (std::set<std::set<int>>{{0, 1}, {3}, {2}}));
}

TEST(Split, ConnectedIdempotentAndRefining)
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const esm::Instance in = random_instance(seed, 15);
        const auto a = cluster::cluster(cluster::node_features(in), in.topology, 3 + seed % 5, Method::KMeans, seed);
        const auto s = cluster::split_disconnected(a, in.topology);
        EXPECT_GE(s.k(), a.k());
        EXPECT_EQ(cluster::split_disconnected(s, in.topology).cluster_of, s.cluster_of);
        for (int c = 0; c < s.k(); ++c) {
            // Nodes stay with their original cluster.
            for (int n : s.clusters[c])
                EXPECT_EQ(a.cluster_of[n], a.cluster_of[s.clusters[c].front()]);
            // Breadth-first search over internal edges reaches every member.
            std::set<int> seen{s.clusters[c].front()};
            std::vector<int> queue{s.clusters[c].front()};
            for (std::size_t h = 0; h < queue.size(); ++h)
                for (int l : s.internal_edges[c]) {
                    const esm::Edge& e = in.topology.edges[l];
                    for (auto [u, v] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}})
                        if (u == queue[h] && seen.insert(v).second)
                            queue.push_back(v);
                }
            EXPECT_EQ(seen.size(), s.clusters[c].size());
        }
    }
}

TEST(Assignment, CsvExport)
{
    const esm::Topology topo = path_graph(3);
    const auto a = cluster::make_assignment({5, 5, 2}, topo);
    EXPECT_EQ(cluster::assignment_csv(a, topo), "node,cluster\nn1,0\nn2,0\nn3,1\n");
}
