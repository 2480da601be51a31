#include "sparta/esm/validation.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace sparta::esm {

bool operator==(const Violation& a, const Violation& b)
{
    return a.code == b.code && a.detail == b.detail;
}

bool operator==(const ValidationReport& a, const ValidationReport& b)
{
    return a.violations == b.violations;
}

bool ValidationReport::contains(const std::string& code) const
{
    for (const Violation& v : violations)
        if (v.code == code)
            return true;
    return false;
}

std::string ValidationReport::to_string() const
{
    std::ostringstream out;
    for (const Violation& v : violations)
        out << v.code << ": " << v.detail << '\n';
    return out.str();
}

namespace {

class Checker {
public:
    explicit Checker(const Instance& instance) : in_(instance) {}

    ValidationReport run()
    {
        check_index_sets();
        check_products();
        check_components();
        check_topology();
        check_temporal();
        if (shapes_ok()) {
            check_series();
            check_supply_paths();
        } else {
            add("series not fully populated", "demand, availability or existing capacity");
        }
        if (!(in_.ghg_limit >= 0.0) || std::isnan(in_.ghg_limit))
            add("negative ghg limit", "ghg_limit");
        if (!(in_.interest_rate >= 0.0) || !std::isfinite(in_.interest_rate))
            add("invalid interest rate", "interest_rate");
        return std::move(report_);
    }

private:
    void add(std::string code, std::string detail)
    {
        report_.violations.push_back({std::move(code), std::move(detail)});
    }

    template <typename Items>
    void check_unique(const Items& items, const char* what)
    {
        std::set<std::string> seen;
        for (const auto& item : items) {
            if (item.id.empty())
                add("empty identifier", what);
            else if (!seen.insert(item.id).second)
                add("duplicate identifier", std::string(what) + " " + item.id);
        }
    }

    void check_index_sets()
    {
        check_unique(in_.products, "product");
        check_unique(in_.components, "component");
        check_unique(in_.topology.nodes, "node");
        check_unique(in_.topology.edges, "edge");
        check_unique(in_.temporal.time_steps, "time step");
        if (in_.topology.nodes.empty())
            add("empty index set", "nodes");
        if (in_.temporal.time_steps.empty())
            add("empty index set", "time_steps");
        if (in_.temporal.investment_years.empty())
            add("empty index set", "investment_years");
    }

    static bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

    void check_products()
    {
        const std::size_t nt = in_.num_time_steps();
        for (const Product& p : in_.products) {
            if (p.import_cost.size() != nt) {
                add("series not fully populated", "import cost of product " + p.id);
                bad_shape_ = true;
            } else if (p.import_allowed) {
                for (double v : p.import_cost)
                    if (!finite_nonneg(v)) {
                        add("negative or non-finite cost", "import cost of product " + p.id);
                        break;
                    }
            }
            if (p.secured_capacity_nodal.size() != in_.num_nodes()) {
                add("series not fully populated", "secured capacity of product " + p.id);
                bad_shape_ = true;
                continue;
            }
            for (double v : p.secured_capacity_nodal)
                if (!finite_nonneg(v)) {
                    add("negative secured capacity", "product " + p.id);
                    break;
                }
            if (p.secured_capacity_system) {
                const double sum = p.secured_system();
                if (std::abs(*p.secured_capacity_system - sum) > 1e-9 * (1.0 + std::abs(sum)))
                    add("secured capacity sum mismatch", "product " + p.id);
            }
        }
    }

    void check_components()
    {
        const std::size_t nb = in_.num_products();
        for (const Component& c : in_.components) {
            const std::string where = "component " + c.id;
            if (c.ratio.size() != nb) {
                add("series not fully populated", "ratio of " + where);
                bad_shape_ = true;
                continue;
            }
            if (c.invest_cost.size() != in_.temporal.num_years()) {
                add("series not fully populated", "invest cost of " + where);
                bad_shape_ = true;
            }
            for (double v : c.invest_cost)
                if (!finite_nonneg(v)) {
                    add("negative or non-finite cost", "invest cost of " + where);
                    break;
                }
            if (!finite_nonneg(c.op_cost))
                add("negative or non-finite cost", "op cost of " + where);
            if (!finite_nonneg(c.op_emission))
                add("negative or non-finite cost", "op emission of " + where);
            if (c.lifetime < 1)
                add("lifetime below one year", where);
            if (c.discount_period < 1)
                add("discount period below one year", where);
            if (!(c.capacity_factor >= 0.0 && c.capacity_factor <= 1.0))
                add("capacity factor out of [0,1]", where);
            if (std::isnan(c.system_capacity_limit) || c.system_capacity_limit < 0.0)
                add("negative capacity limit", "system limit of " + where);
            for (double r : c.ratio)
                if (!std::isfinite(r)) {
                    add("non-finite ratio", where);
                    break;
                }

            const std::size_t locations = c.is_production() ? in_.num_nodes() : in_.num_edges();
            if (c.capacity_limit.size() != locations) {
                add("series not fully populated", "capacity limit of " + where);
                bad_shape_ = true;
            } else {
                for (double v : c.capacity_limit)
                    if (std::isnan(v) || v < 0.0) {
                        add("negative capacity limit", where);
                        break;
                    }
            }

            if (c.is_production()) {
                bool positive = false;
                for (double r : c.ratio)
                    positive = positive || r > 0.0;
                if (!positive)
                    add("production component without output", where);
            } else {
                int nonzero = 0;
                for (std::size_t b = 0; b < nb; ++b) {
                    if (c.ratio[b] == 0.0)
                        continue;
                    ++nonzero;
                    if (!in_.products[b].transportable)
                        add("grid ratio on non-transportable product", where + " carries " + in_.products[b].id);
                }
                if (nonzero != 1)
                    add("grid component must carry exactly one product", where);
                if (!(c.efficiency >= 0.0 && c.efficiency <= 1.0))
                    add("grid efficiency out of [0,1]", where);
                if (c.mode == TransportMode::DcLoadFlow && !(c.susceptance > 0.0 && std::isfinite(c.susceptance)))
                    add("non-positive susceptance", where);
            }
        }
    }

    void check_topology()
    {
        const int nn = static_cast<int>(in_.num_nodes());
        for (const Node& n : in_.topology.nodes)
            if (!std::isfinite(n.x) || !std::isfinite(n.y))
                add("non-finite coordinate", "node " + n.id);
        for (const Edge& e : in_.topology.edges) {
            if (e.from < 0 || e.from >= nn || e.to < 0 || e.to >= nn) {
                add("edge references unknown node", "edge " + e.id);
                bad_shape_ = true;
            } else if (e.from == e.to) {
                add("edge endpoints coincide", "edge " + e.id);
            }
            if (!(e.length > 0.0) || !std::isfinite(e.length))
                add("non-positive edge length", "edge " + e.id);
        }
    }

    void check_temporal()
    {
        for (const TimeStep& t : in_.temporal.time_steps) {
            if (!(t.duration > 0.0))
                add("non-positive duration", "time step " + t.id);
            if (!(t.weight > 0.0))
                add("non-positive weight", "time step " + t.id);
        }
        if (in_.temporal.total_weight() > kMaxAnnualHours + 1e-9)
            add("time-step weights exceed one year", "time_steps");
        const auto& years = in_.temporal.investment_years;
        for (std::size_t y = 1; y < years.size(); ++y)
            if (years[y] <= years[y - 1]) {
                add("investment years not increasing", "investment_years");
                break;
            }
    }

    bool shapes_ok() const
    {
        if (bad_shape_)
            return false;
        const std::size_t nn = in_.num_nodes(), ne = in_.num_edges(), nt = in_.num_time_steps();
        const std::size_t ny = in_.temporal.num_years() == 0 ? 0 : in_.temporal.num_years() - 1;
        auto matrix_ok = [](const Matrix& m, std::size_t rows, std::size_t cols) {
            if (m.size() != rows)
                return false;
            for (const Series& s : m)
                if (s.size() != cols)
                    return false;
            return true;
        };
        if (in_.demand.size() != in_.num_products())
            return false;
        for (const Matrix& m : in_.demand)
            if (!matrix_ok(m, nn, nt))
                return false;
        if (in_.availability.size() != in_.num_components() || in_.existing_capacity.size() != in_.num_components())
            return false;
        for (std::size_t c = 0; c < in_.num_components(); ++c) {
            const bool prod = in_.components[c].is_production();
            if (prod && !matrix_ok(in_.availability[c], nn, nt))
                return false;
            if (!matrix_ok(in_.existing_capacity[c], prod ? nn : ne, ny))
                return false;
        }
        return true;
    }

    void check_series()
    {
        for (std::size_t b = 0; b < in_.num_products(); ++b)
            for (std::size_t n = 0; n < in_.num_nodes(); ++n)
                for (double v : in_.demand[b][n])
                    if (!finite_nonneg(v)) {
                        add("negative or non-finite demand", in_.products[b].id + " at " + in_.topology.nodes[n].id);
                        break;
                    }
        for (std::size_t c = 0; c < in_.num_components(); ++c) {
            const Component& comp = in_.components[c];
            if (comp.is_production()) {
                for (std::size_t n = 0; n < in_.num_nodes(); ++n)
                    for (double v : in_.availability[c][n])
                        if (!(v >= 0.0 && v <= 1.0)) {
                            add("availability out of [0,1]", comp.id + " at " + in_.topology.nodes[n].id);
                            break;
                        }
            }
            double system_existing = 0.0;
            for (std::size_t loc = 0; loc < in_.existing_capacity[c].size(); ++loc) {
                double total = 0.0;
                bool bad = false;
                for (double v : in_.existing_capacity[c][loc]) {
                    bad = bad || !finite_nonneg(v);
                    total += v;
                }
                if (bad)
                    add("negative or non-finite existing capacity", comp.id);
                else if (total > comp.capacity_limit[loc] * (1.0 + 1e-12) + 1e-12)
                    add("existing capacity exceeds limit", comp.id + " at location " + std::to_string(loc));
                system_existing += total;
            }
            if (system_existing > comp.system_capacity_limit * (1.0 + 1e-12) + 1e-12)
                add("existing capacity exceeds limit", comp.id + " system-wide");
        }
    }

    // Demand of a product must have at least one potential source.
    void check_supply_paths()
    {
        for (std::size_t b = 0; b < in_.num_products(); ++b) {
            double demand = 0.0;
            for (const Series& s : in_.demand[b])
                for (double v : s)
                    demand += v;
            double secured = in_.products[b].secured_system();
            if (demand <= 0.0 && secured <= 0.0)
                continue;
            bool source = in_.products[b].import_allowed;
            for (const Component& c : in_.components)
                source = source || (c.is_production() && c.ratio[b] > 0.0);
            if (!source)
                add("demand for product no component can produce", in_.products[b].id);
        }
    }

    const Instance& in_;
    ValidationReport report_;
    bool bad_shape_ = false;
};

} // namespace

ValidationReport validate_instance(const Instance& instance)
{
    return Checker(instance).run();
}

} // namespace sparta::esm
