#include "sparta/lp/system_model.hpp"

#include <cmath>

#include "sparta/esm/economics.hpp"

namespace sparta::lp {

std::string key(const std::string& family, std::initializer_list<std::string> parts)
{
    std::string out = family;
    out.push_back('[');
    bool first = true;
    for (const std::string& p : parts) {
        if (!first)
            out.push_back(',');
        out += p;
        first = false;
    }
    out.push_back(']');
    return out;
}

double SystemModel::flow_value(const std::vector<double>& x, int c, int l, int t) const
{
    if (!flow[c].empty() && flow[c][l][t] >= 0)
        return x[flow[c][l][t]];
    double v = 0.0;
    if (!flow_pos[c].empty() && flow_pos[c][l][t] >= 0)
        v += x[flow_pos[c][l][t]];
    if (!flow_neg[c].empty() && flow_neg[c][l][t] >= 0)
        v -= x[flow_neg[c][l][t]];
    return v;
}

SiteLayout nodal_layout(const esm::Instance& instance, const std::vector<int>& nodes)
{
    SiteLayout layout;
    std::vector<int> site_of(instance.num_nodes(), -1);
    for (int n : nodes) {
        site_of[n] = static_cast<int>(layout.sites.size());
        layout.sites.push_back({instance.topology.nodes[n].id, {n}});
        layout.angle_keys.push_back(instance.topology.nodes[n].id);
    }
    for (std::size_t l = 0; l < instance.num_edges(); ++l) {
        const esm::Edge& e = instance.topology.edges[l];
        if (site_of[e.from] < 0 || site_of[e.to] < 0)
            continue;
        layout.lines.push_back({static_cast<int>(l), site_of[e.from], site_of[e.to], site_of[e.from], site_of[e.to]});
    }
    return layout;
}

ModelSpec nodal_spec(const esm::Instance& instance, SiteLayout layout)
{
    ModelSpec spec;
    const std::size_t nc = instance.num_components();
    spec.availability.assign(nc, {});
    spec.existing.assign(nc, {});
    spec.headroom.assign(nc, {});
    for (std::size_t c = 0; c < nc; ++c) {
        const esm::Component& comp = instance.components[c];
        if (!comp.is_production())
            continue;
        for (const Site& s : layout.sites) {
            const int n = s.nodes.front();
            const double exist = instance.existing_total(static_cast<int>(c), n);
            spec.availability[c].push_back(instance.availability[c][n]);
            spec.existing[c].push_back(exist);
            spec.headroom[c].push_back(std::max(0.0, comp.capacity_limit[n] - exist));
        }
    }
    spec.demand.assign(instance.num_products(), {});
    for (std::size_t b = 0; b < instance.num_products(); ++b)
        for (const Site& s : layout.sites)
            spec.demand[b].push_back(instance.demand[b][s.nodes.front()]);
    for (const Site& s : layout.sites)
        spec.scope_nodes.push_back(s.nodes.front());
    for (const Line& line : layout.lines)
        spec.scope_edges.push_back(line.edge);
    spec.layout = std::move(layout);
    return spec;
}

namespace {

class Builder {
public:
    Builder(const esm::Instance& in, const ModelSpec& spec) : in_(in), spec_(spec)
    {
        S_ = static_cast<int>(spec.layout.sites.size());
        T_ = static_cast<int>(in.num_time_steps());
        C_ = static_cast<int>(in.num_components());
        B_ = static_cast<int>(in.num_products());
        E_ = static_cast<int>(in.num_edges());
        cur_ = in.temporal.current_year_index();
        m_.layout = spec.layout;
        m_.scope_nodes = spec.scope_nodes;
        m_.scope_edges = spec.scope_edges;
        m_.fixed_exports = spec.fixed_exports;
        m_.fixed_new_production = spec.fixed_new_production;
        m_.fixed_new_grid = spec.fixed_new_grid;
    }

    SystemModel build()
    {
        m_.system_balance.assign(B_, std::vector<int>(T_, -1));
        add_capacity();
        add_production();
        add_imports();
        add_flows();
        add_balances();
        if (spec_.system_balance)
            add_system_balances();
        if (spec_.system_secured && !spec_.fixed_new_production)
            add_system_secured();
        if (spec_.nodal_secured && !spec_.fixed_new_production)
            add_nodal_secured();
        if (spec_.system_limits)
            add_system_limits();
        if (spec_.ghg_cap)
            add_ghg_cap();
        add_constant_capex();
        return std::move(m_);
    }

private:
    const std::string& site_name(int s) const { return spec_.layout.sites[s].name; }
    const std::string& comp_id(int c) const { return in_.components[c].id; }
    const std::string& prod_id(int b) const { return in_.products[b].id; }
    const std::string& edge_id(int l) const { return in_.topology.edges[l].id; }
    const std::string& step_id(int t) const { return in_.temporal.time_steps[t].id; }

    double fixed_production(int c, int s) const
    {
        return spec_.fixed_new_production ? (*spec_.fixed_new_production)[c][s] : 0.0;
    }

    double fixed_grid(int c, int l) const { return spec_.fixed_new_grid ? (*spec_.fixed_new_grid)[c][l] : 0.0; }

    void add_capacity()
    {
        m_.new_capacity.assign(C_, std::vector<int>(S_, -1));
        m_.new_grid.assign(C_, std::vector<int>(E_, -1));
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            const double ann = esm::annualized_invest(in_, c, cur_);
            if (comp.is_production()) {
                if (spec_.fixed_new_production)
                    continue;
                for (int s = 0; s < S_; ++s) {
                    const double room = spec_.headroom[c][s];
                    if (room > 0.0)
                        m_.new_capacity[c][s] = lp().add_variable(key("new", {comp_id(c), site_name(s)}), 0.0, room, ann);
                }
            } else {
                if (spec_.fixed_new_grid)
                    continue;
                for (const Line& line : spec_.layout.lines) {
                    const int l = line.edge;
                    const double room = comp.capacity_limit[l] - in_.existing_total(c, l);
                    if (room > 0.0)
                        m_.new_grid[c][l] = lp().add_variable(key("gnew", {comp_id(c), edge_id(l)}), 0.0, room,
                                                              ann * in_.topology.edges[l].length);
                }
            }
        }
    }

    void add_production()
    {
        m_.production.assign(C_, IndexMatrix(S_, std::vector<int>(T_, -1)));
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (!comp.is_production())
                continue;
            for (int s = 0; s < S_; ++s) {
                const int nv = m_.new_capacity[c][s];
                const double base = spec_.existing[c][s] + fixed_production(c, s);
                if (nv < 0 && base <= 0.0)
                    continue;
                for (int t = 0; t < T_; ++t) {
                    const double a = spec_.availability[c][s][t];
                    if (a <= 0.0)
                        continue;
                    const double cost = comp.op_cost * in_.weight(t);
                    const double upper = nv < 0 ? a * base : kInf;
                    const int p = lp().add_variable(key("prod", {comp_id(c), site_name(s), step_id(t)}), 0.0, upper, cost);
                    m_.production[c][s][t] = p;
                    if (nv >= 0)
                        lp().add_constraint(key("avail", {comp_id(c), site_name(s), step_id(t)}), {{p, 1.0}, {nv, -a}},
                                            Relation::LessEqual, a * base);
                }
            }
        }
    }

    void add_imports()
    {
        m_.imports.assign(B_, IndexMatrix(S_, std::vector<int>(T_, -1)));
        for (int b = 0; b < B_; ++b) {
            const esm::Product& p = in_.products[b];
            if (!p.import_allowed)
                continue;
            for (int s = 0; s < S_; ++s)
                for (int t = 0; t < T_; ++t)
                    m_.imports[b][s][t] = lp().add_variable(key("imp", {prod_id(b), site_name(s), step_id(t)}), 0.0,
                                                            kInf, p.import_cost[t] * in_.weight(t));
        }
    }

    int angle_var(int b, int k, int t)
    {
        int& v = m_.angle[b][k][t];
        if (v < 0)
            v = lp().add_variable(key("ang", {prod_id(b), spec_.layout.angle_keys[k], step_id(t)}), -kInf, kInf, 0.0);
        return v;
    }

    void add_flows()
    {
        m_.flow_pos.assign(C_, {});
        m_.flow_neg.assign(C_, {});
        m_.flow.assign(C_, {});
        m_.angle.assign(B_, IndexMatrix(spec_.layout.angle_keys.size(), std::vector<int>(T_, -1)));
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (!comp.is_grid())
                continue;
            const int b = comp.carried_product();
            const bool dc = comp.is_dc();
            (dc ? m_.flow[c] : m_.flow_pos[c]).assign(E_, std::vector<int>(T_, -1));
            if (!dc)
                m_.flow_neg[c].assign(E_, std::vector<int>(T_, -1));
            for (const Line& line : spec_.layout.lines) {
                const int l = line.edge;
                const int gv = m_.new_grid[c][l];
                const double base = in_.existing_total(c, l) + fixed_grid(c, l);
                if (!dc && gv < 0 && base <= 0.0)
                    continue;
                const double cap = gv < 0 ? base : kInf;
                for (int t = 0; t < T_; ++t) {
                    const std::string& lid = edge_id(l);
                    if (dc) {
                        const int f = lp().add_variable(key("flow", {comp_id(c), lid, step_id(t)}), -cap, cap, 0.0);
                        m_.flow[c][l][t] = f;
                        if (gv >= 0) {
                            lp().add_constraint(key("cap+", {comp_id(c), lid, step_id(t)}), {{f, 1.0}, {gv, -1.0}},
                                                Relation::LessEqual, base);
                            lp().add_constraint(key("cap-", {comp_id(c), lid, step_id(t)}), {{f, -1.0}, {gv, -1.0}},
                                                Relation::LessEqual, base);
                        }
                        const int af = angle_var(b, line.from_angle, t);
                        const int at = angle_var(b, line.to_angle, t);
                        lp().add_constraint(key("kvl", {comp_id(c), lid, step_id(t)}),
                                            {{f, 1.0}, {af, -comp.susceptance}, {at, comp.susceptance}},
                                            Relation::Equal, 0.0);
                    } else {
                        const int fp = lp().add_variable(key("fp", {comp_id(c), lid, step_id(t)}), 0.0, cap, 0.0);
                        const int fm = lp().add_variable(key("fm", {comp_id(c), lid, step_id(t)}), 0.0, cap, 0.0);
                        m_.flow_pos[c][l][t] = fp;
                        m_.flow_neg[c][l][t] = fm;
                        if (gv >= 0) {
                            lp().add_constraint(key("cap+", {comp_id(c), lid, step_id(t)}), {{fp, 1.0}, {gv, -1.0}},
                                                Relation::LessEqual, base);
                            lp().add_constraint(key("cap-", {comp_id(c), lid, step_id(t)}), {{fm, 1.0}, {gv, -1.0}},
                                                Relation::LessEqual, base);
                        }
                    }
                }
            }
        }
    }

    // Adds theta * sign * (flow out of the origin site) for every line touching site s.
    void append_exports(std::vector<Term>& terms, int b, int s, int t) const
    {
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (!comp.is_grid() || comp.carried_product() != b)
                continue;
            const double theta = comp.ratio[b];
            for (const Line& line : spec_.layout.lines) {
                double sign = 0.0;
                if (line.from_site == s)
                    sign += 1.0;
                if (line.to_site == s)
                    sign -= 1.0;
                if (sign == 0.0)
                    continue;
                const int l = line.edge;
                if (comp.is_dc()) {
                    if (m_.flow[c][l][t] >= 0)
                        terms.push_back({m_.flow[c][l][t], -theta * sign});
                } else if (m_.flow_pos[c][l][t] >= 0) {
                    terms.push_back({m_.flow_pos[c][l][t], -theta * sign});
                    terms.push_back({m_.flow_neg[c][l][t], theta * sign});
                }
            }
        }
    }

    double fixed_export(int b, int s, int t) const
    {
        return spec_.fixed_exports.empty() ? 0.0 : spec_.fixed_exports[b][s][t];
    }

    void add_balances()
    {
        for (int b = 0; b < B_; ++b)
            for (int s = 0; s < S_; ++s)
                for (int t = 0; t < T_; ++t) {
                    std::vector<Term> terms;
                    for (int c = 0; c < C_; ++c) {
                        const double theta = in_.components[c].ratio[b];
                        if (theta != 0.0 && in_.components[c].is_production() && m_.production[c][s][t] >= 0)
                            terms.push_back({m_.production[c][s][t], theta});
                    }
                    if (m_.imports[b][s][t] >= 0)
                        terms.push_back({m_.imports[b][s][t], 1.0});
                    append_exports(terms, b, s, t);
                    const double rhs = spec_.demand[b][s][t] + fixed_export(b, s, t);
                    if (terms.empty() && rhs <= 0.0)
                        continue;
                    lp().add_constraint(key("bal", {prod_id(b), site_name(s), step_id(t)}), std::move(terms),
                                        Relation::GreaterEqual, rhs);
                }
    }

    bool lossy(int b) const
    {
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (comp.is_grid() && !comp.is_dc() && comp.carried_product() == b && comp.efficiency < 1.0)
                return true;
        }
        return false;
    }

    void add_system_balances()
    {
        for (int b = 0; b < B_; ++b) {
            if (!lossy(b))
                continue;
            for (int t = 0; t < T_; ++t) {
                std::vector<Term> terms;
                double rhs = 0.0;
                for (int s = 0; s < S_; ++s) {
                    for (int c = 0; c < C_; ++c) {
                        const double theta = in_.components[c].ratio[b];
                        if (theta != 0.0 && in_.components[c].is_production() && m_.production[c][s][t] >= 0)
                            terms.push_back({m_.production[c][s][t], theta});
                    }
                    if (m_.imports[b][s][t] >= 0)
                        terms.push_back({m_.imports[b][s][t], 1.0});
                    rhs += spec_.demand[b][s][t] + fixed_export(b, s, t);
                }
                for (int c = 0; c < C_; ++c) {
                    const esm::Component& comp = in_.components[c];
                    if (!comp.is_grid() || comp.is_dc() || comp.carried_product() != b)
                        continue;
                    for (const Line& line : spec_.layout.lines) {
                        const int l = line.edge;
                        const double x = comp.ratio[b] * comp.loss_factor(in_.topology.edges[l].length);
                        if (x == 0.0 || m_.flow_pos[c][l][t] < 0)
                            continue;
                        terms.push_back({m_.flow_pos[c][l][t], -x});
                        terms.push_back({m_.flow_neg[c][l][t], -x});
                    }
                }
                m_.system_balance[b][t] =
                    lp().add_constraint(key("sys", {prod_id(b), step_id(t)}), std::move(terms), Relation::GreaterEqual, rhs);
            }
        }
    }

    void add_system_secured()
    {
        for (int b = 0; b < B_; ++b) {
            const double pmin = in_.products[b].secured_system();
            if (pmin <= 0.0)
                continue;
            std::vector<Term> terms;
            double existing = 0.0;
            for (int c = 0; c < C_; ++c) {
                const esm::Component& comp = in_.components[c];
                const double coef = comp.capacity_factor * comp.ratio[b];
                if (!comp.is_production() || coef == 0.0)
                    continue;
                for (int s = 0; s < S_; ++s) {
                    existing += coef * spec_.existing[c][s];
                    if (m_.new_capacity[c][s] >= 0)
                        terms.push_back({m_.new_capacity[c][s], coef});
                }
            }
            lp().add_constraint(key("secured", {prod_id(b)}), std::move(terms), Relation::GreaterEqual, pmin - existing);
        }
    }

    // Single-node sites get the exact nodal row; multi-node sites the
    // aggregated row over producing components.
    void add_nodal_secured()
    {
        for (int b = 0; b < B_; ++b) {
            const esm::Product& p = in_.products[b];
            if (p.transportable)
                continue;
            for (int s = 0; s < S_; ++s) {
                const std::vector<int>& nodes = spec_.layout.sites[s].nodes;
                std::vector<Term> terms;
                double rhs = 0.0;
                if (nodes.size() == 1) {
                    const int n = nodes.front();
                    if (p.secured_capacity_nodal[n] <= 0.0)
                        continue;
                    rhs = p.secured_capacity_nodal[n];
                    for (int c = 0; c < C_; ++c) {
                        const esm::Component& comp = in_.components[c];
                        const double coef = comp.capacity_factor * comp.ratio[b];
                        if (!comp.is_production() || coef == 0.0)
                            continue;
                        rhs -= coef * spec_.existing[c][s];
                        if (m_.new_capacity[c][s] >= 0)
                            terms.push_back({m_.new_capacity[c][s], coef});
                    }
                } else {
                    for (int n : nodes) {
                        double delta = p.secured_capacity_nodal[n];
                        for (int c = 0; c < C_; ++c) {
                            const esm::Component& comp = in_.components[c];
                            if (comp.is_production())
                                delta -= comp.capacity_factor * comp.ratio[b] * in_.existing_total(c, n);
                        }
                        rhs += std::max(delta, 0.0);
                    }
                    if (rhs <= 0.0)
                        continue;
                    for (int c = 0; c < C_; ++c) {
                        const esm::Component& comp = in_.components[c];
                        const double coef = comp.capacity_factor * comp.ratio[b];
                        if (comp.is_production() && coef > 0.0 && m_.new_capacity[c][s] >= 0)
                            terms.push_back({m_.new_capacity[c][s], coef});
                    }
                }
                lp().add_constraint(key("secn", {prod_id(b), site_name(s)}), std::move(terms), Relation::GreaterEqual, rhs);
            }
        }
    }

    void add_system_limits()
    {
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (!std::isfinite(comp.system_capacity_limit))
                continue;
            std::vector<Term> terms;
            double existing = 0.0;
            if (comp.is_production()) {
                for (std::size_t n = 0; n < in_.num_nodes(); ++n)
                    existing += in_.existing_total(c, static_cast<int>(n));
                for (int s = 0; s < S_; ++s)
                    if (m_.new_capacity[c][s] >= 0)
                        terms.push_back({m_.new_capacity[c][s], 1.0});
            } else {
                for (int l = 0; l < E_; ++l) {
                    existing += in_.existing_total(c, l);
                    if (m_.new_grid[c][l] >= 0)
                        terms.push_back({m_.new_grid[c][l], 1.0});
                }
            }
            if (terms.empty())
                continue;
            lp().add_constraint(key("limit", {comp_id(c)}), std::move(terms), Relation::LessEqual,
                                comp.system_capacity_limit - existing);
        }
    }

    void add_ghg_cap()
    {
        if (!std::isfinite(in_.ghg_limit))
            return;
        std::vector<Term> terms;
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (!comp.is_production() || comp.op_emission == 0.0)
                continue;
            for (int s = 0; s < S_; ++s)
                for (int t = 0; t < T_; ++t)
                    if (m_.production[c][s][t] >= 0)
                        terms.push_back({m_.production[c][s][t], comp.op_emission * in_.weight(t)});
        }
        if (terms.empty())
            return;
        lp().add_constraint("ghg", std::move(terms), Relation::LessEqual, in_.ghg_limit);
    }

    void add_constant_capex()
    {
        double offset = 0.0;
        for (int c = 0; c < C_; ++c) {
            const esm::Component& comp = in_.components[c];
            if (comp.is_production())
                for (int n : spec_.scope_nodes)
                    offset += esm::existing_capex(in_, c, n);
            else
                for (int l : spec_.scope_edges)
                    offset += esm::existing_capex(in_, c, l);
            const double ann = esm::annualized_invest(in_, c, cur_);
            if (comp.is_production() && spec_.fixed_new_production)
                for (int s = 0; s < S_; ++s)
                    offset += ann * (*spec_.fixed_new_production)[c][s];
            if (comp.is_grid() && spec_.fixed_new_grid)
                for (const Line& line : spec_.layout.lines)
                    offset += ann * in_.topology.edges[line.edge].length * (*spec_.fixed_new_grid)[c][line.edge];
        }
        lp().set_objective_offset(offset);
    }

    LinearProgram& lp() { return m_.lp; }

    const esm::Instance& in_;
    const ModelSpec& spec_;
    SystemModel m_;
    int S_ = 0, T_ = 0, C_ = 0, B_ = 0, E_ = 0;
    std::size_t cur_ = 0;
};

} // namespace

SystemModel build_system_model(const esm::Instance& instance, const ModelSpec& spec)
{
    return Builder(instance, spec).build();
}

} // namespace sparta::lp
