#include "sparta/app/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sparta/common/error.hpp"

namespace sparta::app {

namespace {

constexpr double kSide = 100.0;
constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxRetries = 20;
constexpr double kMargin = 1.25;

// Uniform reals from the raw engine output so documents do not depend on the
// standard library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool chance(double p) { return uniform() < p; }
    int index(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }

private:
    std::mt19937_64 engine_;
};

double round6(double v)
{
    return std::round(v * 1e6) / 1e6;
}

// Smooth profile in [lo, hi]: a random low-order Fourier series rescaled.
esm::Series smooth_profile(Rng& rng, int steps, double lo, double hi)
{
    const double a1 = rng.uniform(0.5, 1.0), p1 = rng.uniform(0.0, 2 * kPi);
    const double a2 = rng.uniform(0.0, 0.5), p2 = rng.uniform(0.0, 2 * kPi);
    esm::Series raw(steps);
    for (int t = 0; t < steps; ++t) {
        const double x = 2 * kPi * t / steps;
        raw[t] = a1 * std::sin(x + p1) + a2 * std::sin(2 * x + p2) + rng.uniform(-0.15, 0.15);
    }
    const auto [mn, mx] = std::minmax_element(raw.begin(), raw.end());
    const double span = *mx - *mn;
    esm::Series out(steps);
    for (int t = 0; t < steps; ++t) {
        const double u = span > 0 ? (raw[t] - *mn) / span : 0.5;
        out[t] = round6(std::clamp(lo + (hi - lo) * u, 0.0, 1.0));
    }
    return out;
}

// Daylight shape: zero for half the cycle.
esm::Series solar_profile(Rng& rng, int steps)
{
    const double peak = rng.uniform(0.6, 1.0);
    const double phase = rng.uniform(-0.3, 0.3);
    esm::Series out(steps);
    for (int t = 0; t < steps; ++t) {
        const double s = std::sin(2 * kPi * t / steps + phase);
        out[t] = round6(std::max(0.0, peak * s));
    }
    return out;
}

std::vector<esm::Edge> build_edges(const std::vector<esm::Node>& nodes, int target)
{
    const int n = static_cast<int>(nodes.size());
    auto dist = [&](int a, int b) { return std::hypot(nodes[a].x - nodes[b].x, nodes[a].y - nodes[b].y); };
    std::vector<std::pair<int, int>> pairs;
    // Prim's spanning tree.
    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, esm::kInfinity);
    std::vector<int> parent(n, -1);
    best[0] = 0.0;
    for (int it = 0; it < n; ++it) {
        int u = -1;
        for (int v = 0; v < n; ++v)
            if (!in_tree[v] && (u < 0 || best[v] < best[u]))
                u = v;
        in_tree[u] = 1;
        if (parent[u] >= 0)
            pairs.emplace_back(std::min(u, parent[u]), std::max(u, parent[u]));
        for (int v = 0; v < n; ++v)
            if (!in_tree[v] && dist(u, v) < best[v]) {
                best[v] = dist(u, v);
                parent[v] = u;
            }
    }
    std::vector<std::pair<int, int>> extra;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) == pairs.end())
                extra.emplace_back(a, b);
    std::stable_sort(extra.begin(), extra.end(),
                     [&](const auto& p, const auto& q) { return dist(p.first, p.second) < dist(q.first, q.second); });
    for (std::size_t i = 0; i < extra.size() && static_cast<int>(pairs.size()) < target; ++i)
        pairs.push_back(extra[i]);

    std::vector<esm::Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [a, b] = pairs[i];
        edges.push_back({"l" + std::to_string(i + 1), a, b, round6(std::max(1.0, dist(a, b)))});
    }
    return edges;
}

esm::Component production(const std::string& id, int products, double invest, double op, double emission,
                          double gamma, int lifetime)
{
    esm::Component c;
    c.id = id;
    c.ratio.assign(products, 0.0);
    c.invest_cost = {invest * 1.15, invest};
    c.op_cost = op;
    c.op_emission = emission;
    c.capacity_factor = gamma;
    c.lifetime = lifetime;
    c.discount_period = 20;
    return c;
}

esm::Component grid(const std::string& id, int products, int product, double invest, double efficiency,
                    esm::TransportMode mode)
{
    esm::Component c;
    c.id = id;
    c.kind = esm::ComponentKind::Grid;
    c.ratio.assign(products, 0.0);
    c.ratio[product] = 1.0;
    c.invest_cost = {invest * 1.1, invest};
    c.lifetime = 40;
    c.discount_period = 20;
    c.efficiency = efficiency;
    c.mode = mode;
    return c;
}

class Generator {
public:
    Generator(const GeneratorSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

    // Returns false when the sampled limits miss the supply margin.
    bool build(esm::Instance& in)
    {
        const int N = spec_.n_nodes, T = spec_.n_time_steps;
        const bool heat = spec_.n_non_transportable > 0;
        const bool gas = spec_.n_products >= 3 || (spec_.n_products == 2 && !heat);
        el_ = 0;
        heat_ = heat ? 1 : -1;
        gas_ = gas ? (heat ? 2 : 1) : -1;
        const int B = 1 + (heat ? 1 : 0) + (gas ? 1 : 0);

        for (int n = 0; n < N; ++n)
            in.topology.nodes.push_back({"n" + std::to_string(n + 1), round6(rng_.uniform(0, kSide)),
                                         round6(rng_.uniform(0, kSide))});
        in.topology.edges = build_edges(in.topology.nodes, static_cast<int>(std::lround(spec_.density * N)));
        const double hours = 8760.0 / T;
        for (int t = 0; t < T; ++t)
            in.temporal.time_steps.push_back({"t" + std::to_string(t + 1), 1.0, hours});
        in.temporal.investment_years = {2020, 2030};
        in.interest_rate = 0.05;

        add_products(in, B);
        add_components(in, B);
        esm::allocate_series(in);
        fill_series(in);
        if (!margin_ok(in))
            return false;
        set_secured_capacity(in);
        set_ghg_limit(in);
        return true;
    }

private:
    void add_products(esm::Instance& in, int B)
    {
        const int N = spec_.n_nodes, T = spec_.n_time_steps;
        for (int b = 0; b < B; ++b) {
            esm::Product p;
            p.id = b == el_ ? "el" : b == heat_ ? "heat" : "gas";
            p.transportable = b != heat_;
            p.import_allowed = b == gas_;
            p.import_cost.assign(T, b == gas_ ? 0.03 : 0.0);
            p.secured_capacity_nodal.assign(N, 0.0);
            in.products.push_back(p);
        }
    }

    void add_components(esm::Instance& in, int B)
    {
        const int N = spec_.n_nodes;
        const int E = static_cast<int>(in.topology.edges.size());
        std::vector<esm::Component> roster;
        esm::Component pv = production("pv", B, 800.0, 0.0, 0.0, 0.0, 25);
        pv.ratio[el_] = 1.0;
        esm::Component ccgt = production("ccgt", B, 600.0, gas_ >= 0 ? 0.01 : 0.065, 0.4, 0.9, 30);
        ccgt.ratio[el_] = 1.0;
        if (gas_ >= 0)
            ccgt.ratio[gas_] = -1.8;
        esm::Component boiler = production("boiler", B, 150.0, gas_ >= 0 ? 0.005 : 0.04, 0.25, 1.0, 20);
        if (heat_ >= 0)
            boiler.ratio[heat_] = 1.0;
        if (gas_ >= 0)
            boiler.ratio[gas_] = -1.1;
        esm::Component wind = production("wind", B, 1400.0, 0.001, 0.0, 0.1, 25);
        wind.ratio[el_] = 1.0;
        esm::Component hp = production("heatpump", B, 900.0, 0.002, 0.0, 0.8, 20);
        if (heat_ >= 0) {
            hp.ratio[heat_] = 1.0;
            hp.ratio[el_] = -0.33;
        }

        roster.push_back(pv);
        roster.push_back(ccgt);
        if (heat_ >= 0)
            roster.push_back(boiler);
        roster.push_back(wind);
        if (heat_ >= 0)
            roster.push_back(hp);
        const int keep = std::clamp(spec_.n_components, heat_ >= 0 ? 3 : 2, static_cast<int>(roster.size()));
        roster.resize(keep);
        for (esm::Component& c : roster) {
            c.capacity_limit.assign(N, esm::kInfinity);
            if (c.id == "pv" || c.id == "wind")
                for (int n = 0; n < N; ++n)
                    c.capacity_limit[n] = round6(rng_.uniform(1.0, 3.0) * spec_.demand_max);
            if (c.id == "ccgt")
                for (int n = 0; n < N; ++n)
                    c.capacity_limit[n] = round6(rng_.uniform(0.5, 1.5) * spec_.demand_max);
            in.components.push_back(c);
        }
        // A heat product needs a local producer even when the roster is cut short.
        if (heat_ >= 0 && keep < 5) {
            hp.capacity_limit.assign(N, esm::kInfinity);
            if (std::none_of(in.components.begin(), in.components.end(), [](const auto& c) { return c.id == "heatpump"; }))
                in.components.push_back(hp);
        }

        esm::Component line = grid("line", B, el_, 2.0, 0.9995, spec_.transport_mode);
        line.capacity_limit.assign(E, esm::kInfinity);
        in.components.push_back(line);
        if (gas_ >= 0) {
            esm::Component pipe = grid("pipe", B, gas_, 1.0, 0.9998, esm::TransportMode::Transshipment);
            pipe.capacity_limit.assign(E, esm::kInfinity);
            in.components.push_back(pipe);
        }
    }

    void fill_series(esm::Instance& in)
    {
        const int N = spec_.n_nodes, T = spec_.n_time_steps;
        const int E = static_cast<int>(in.topology.edges.size());
        const esm::Series el_shape = smooth_profile(rng_, T, 0.6, 1.0);
        const esm::Series heat_shape = smooth_profile(rng_, T, 0.3, 1.0);
        for (int n = 0; n < N; ++n) {
            const double base = rng_.uniform(spec_.demand_min, spec_.demand_max);
            for (int t = 0; t < T; ++t)
                in.demand[el_][n][t] = round6(base * el_shape[t] * rng_.uniform(0.9, 1.1));
            if (heat_ >= 0) {
                const double hbase = rng_.uniform(0.3, 0.8) * rng_.uniform(spec_.demand_min, spec_.demand_max);
                for (int t = 0; t < T; ++t)
                    in.demand[heat_][n][t] = round6(hbase * heat_shape[t]);
            }
        }
        for (std::size_t c = 0; c < in.num_components(); ++c) {
            esm::Component& comp = in.components[c];
            if (!comp.is_production())
                continue;
            // Weather is shared across the region: one time shape per technology,
            // scaled by a smooth site-quality field over the coordinates.
            const bool weather = comp.id == "pv" || comp.id == "wind";
            const esm::Series shape = comp.id == "pv"     ? solar_profile(rng_, T)
                                      : comp.id == "wind" ? smooth_profile(rng_, T, spec_.availability_min,
                                                                           spec_.availability_max)
                                                          : esm::Series{};
            const double fx = rng_.uniform(0.5, 1.5) * 2 * kPi / 200.0, px = rng_.uniform(0.0, 2 * kPi);
            const double fy = rng_.uniform(0.5, 1.5) * 2 * kPi / 200.0, py = rng_.uniform(0.0, 2 * kPi);
            for (int n = 0; n < N; ++n) {
                if (!weather) {
                    in.availability[c][n].assign(T, comp.id == "ccgt" ? 0.95 : 1.0);
                    continue;
                }
                const esm::Node& node = in.topology.nodes[n];
                const double quality = 0.85 + 0.15 * std::sin(fx * node.x + px) * std::cos(fy * node.y + py);
                in.availability[c][n].resize(T);
                for (int t = 0; t < T; ++t)
                    in.availability[c][n][t] =
                        round6(std::clamp(shape[t] * quality * rng_.uniform(0.97, 1.03), 0.0, 1.0));
            }
            // Brownfield: older plants at a subset of nodes.
            const double share = comp.id == "ccgt" ? 0.4 : comp.id == "boiler" ? 0.5 : comp.id == "pv" ? 0.2 : 0.0;
            for (int n = 0; n < N; ++n) {
                if (!rng_.chance(share))
                    continue;
                const double cap = rng_.uniform(0.2, 0.6) * spec_.demand_max;
                in.existing_capacity[c][n][0] = round6(std::min(cap, comp.capacity_limit[n]));
            }
        }
        for (std::size_t c = 0; c < in.num_components(); ++c)
            if (in.components[c].is_grid())
                for (int l = 0; l < E; ++l)
                    if (rng_.chance(0.6))
                        in.existing_capacity[c][l][0] = round6(rng_.uniform(0.1, 0.5) * spec_.demand_max);
    }

    // Producible electricity at every step exceeds demand plus the heat-pump
    // draw for all heat by the margin.
    bool margin_ok(const esm::Instance& in) const
    {
        const int N = spec_.n_nodes, T = spec_.n_time_steps;
        for (int t = 0; t < T; ++t) {
            double supply = 0.0, need = 0.0;
            for (int n = 0; n < N; ++n) {
                need += in.demand[el_][n][t];
                if (heat_ >= 0)
                    need += 0.33 * in.demand[heat_][n][t];
                for (std::size_t c = 0; c < in.num_components(); ++c) {
                    const esm::Component& comp = in.components[c];
                    if (comp.is_production() && comp.ratio[el_] > 0)
                        supply += comp.ratio[el_] * in.availability[c][n][t] * comp.capacity_limit[n];
                }
            }
            if (supply < kMargin * need)
                return false;
        }
        return true;
    }

    void set_secured_capacity(esm::Instance& in)
    {
        if (heat_ < 0)
            return;
        esm::Product& p = in.products[heat_];
        for (int n = 0; n < spec_.n_nodes; ++n) {
            const esm::Series& d = in.demand[heat_][n];
            p.secured_capacity_nodal[n] = round6(0.6 * *std::max_element(d.begin(), d.end()));
        }
        p.secured_capacity_system = std::accumulate(p.secured_capacity_nodal.begin(), p.secured_capacity_nodal.end(), 0.0);
    }

    // The cap sits between an achievable floor and all-fossil supply. The
    // floor dispatch serves heat by heat pumps and covers the electricity
    // shortfall of renewables at their limits with gas turbines; grid
    // expansion is unbounded, so it is feasible.
    void set_ghg_limit(esm::Instance& in)
    {
        double fossil = 0.0, floor = 0.0;
        for (int t = 0; t < spec_.n_time_steps; ++t) {
            double need = 0.0, renewable = 0.0;
            for (int n = 0; n < spec_.n_nodes; ++n) {
                fossil += 0.4 * in.demand[el_][n][t] * in.weight(t);
                need += in.demand[el_][n][t];
                if (heat_ >= 0) {
                    fossil += 0.25 * in.demand[heat_][n][t] * in.weight(t);
                    need += 0.33 * in.demand[heat_][n][t];
                }
                for (std::size_t c = 0; c < in.num_components(); ++c) {
                    const esm::Component& comp = in.components[c];
                    if (comp.is_production() && comp.ratio[el_] > 0 && comp.op_emission == 0.0)
                        renewable += in.availability[c][n][t] * comp.capacity_limit[n];
                }
            }
            floor += 0.4 * std::max(0.0, need - renewable) * in.weight(t);
        }
        floor = std::min(floor, fossil);
        in.ghg_limit = std::ceil(floor + spec_.ghg_share * (fossil - floor));
    }

    const GeneratorSpec& spec_;
    Rng rng_;
    int el_ = 0, heat_ = -1, gas_ = -1;
};

} // namespace

esm::Instance generate_instance(const GeneratorSpec& spec)
{
    if (spec.n_nodes < 1 || spec.n_time_steps < 1 || spec.n_products < 1 || spec.n_products > 3)
        throw ConfigurationError("generator: node, step, or product count out of range");
    if (spec.n_non_transportable < 0 || spec.n_non_transportable > 1 || spec.n_non_transportable >= spec.n_products)
        throw ConfigurationError("generator: at most one non-transportable product, and not the only product");
    if (spec.n_components < 3 || spec.n_components > 5)
        throw ConfigurationError("generator: production roster size must be 3..5");
    if (spec.density < 0 || spec.demand_min < 0 || spec.demand_max < spec.demand_min || spec.availability_min < 0 ||
        spec.availability_max > 1 || spec.availability_max < spec.availability_min || spec.ghg_share < 0 ||
        spec.ghg_share > 1)
        throw ConfigurationError("generator: magnitude range out of bounds");
    std::uint64_t seed = spec.seed;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        esm::Instance in;
        if (Generator(spec, seed).build(in))
            return in;
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    throw ConfigurationError("generator: supply margin not met within the retry budget");
}

} // namespace sparta::app
