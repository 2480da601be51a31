#include "sparta/bounds/bound_models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "sparta/common/parallel.hpp"
#include "sparta/esm/economics.hpp"

namespace sparta::bounds {

using lp::Relation;
using lp::Term;

namespace {

std::string cluster_name(int a)
{
    return "A" + std::to_string(a + 1);
}

lp::SiteLayout cluster_layout(const esm::Instance& in, const cluster::ClusterAssignment& asg, BoundKind kind)
{
    lp::SiteLayout layout;
    for (int a = 0; a < asg.k(); ++a)
        layout.sites.push_back({cluster_name(a), asg.clusters[a]});
    if (kind == BoundKind::Upper)
        for (int a = 0; a < asg.k(); ++a)
            layout.angle_keys.push_back(cluster_name(a));
    // Lower bound: one potential per boundary node, so the external lines keep
    // exactly their full-scale load-flow equations.
    std::map<int, int> node_key;
    auto key_of = [&](int n) {
        auto [it, fresh] = node_key.try_emplace(n, static_cast<int>(layout.angle_keys.size()));
        if (fresh)
            layout.angle_keys.push_back(in.topology.nodes[n].id);
        return it->second;
    };
    for (std::size_t l = 0; l < in.num_edges(); ++l) {
        const esm::Edge& e = in.topology.edges[l];
        const int af = asg.cluster_of[e.from], at = asg.cluster_of[e.to];
        if (af == at)
            continue;
        lp::Line line{static_cast<int>(l), af, at, af, at};
        if (kind == BoundKind::Lower) {
            line.from_angle = key_of(e.from);
            line.to_angle = key_of(e.to);
        }
        layout.lines.push_back(line);
    }
    return layout;
}

lp::ModelSpec cluster_spec(const esm::Instance& in, const AggregatedInstance& agg, lp::SiteLayout layout)
{
    lp::ModelSpec spec;
    const int A = agg.assignment.k();
    spec.availability = agg.availability;
    spec.demand = agg.demand;
    spec.existing.assign(in.num_components(), {});
    spec.headroom = agg.headroom;
    for (std::size_t c = 0; c < in.num_components(); ++c)
        if (in.components[c].is_production())
            for (int a = 0; a < A; ++a)
                spec.existing[c].push_back(agg.existing_total(static_cast<int>(c), a));
    for (std::size_t n = 0; n < in.num_nodes(); ++n)
        spec.scope_nodes.push_back(static_cast<int>(n));
    for (std::size_t l = 0; l < in.num_edges(); ++l)
        spec.scope_edges.push_back(static_cast<int>(l));
    spec.layout = std::move(layout);
    return spec;
}

double min_efficiency(const esm::Instance& in, int product, int edge, bool* any)
{
    double eta = 1.0;
    *any = false;
    for (int c : in.grid_components_for(product)) {
        const esm::Component& comp = in.components[c];
        if (comp.is_dc())
            continue;
        // Carriers that can never exist on the edge do not route flow.
        if (comp.capacity_limit[edge] <= 0.0 && in.existing_total(c, edge) <= 0.0)
            continue;
        *any = true;
        eta = std::min(eta, comp.efficiency);
    }
    return eta;
}

class UpperExtras {
public:
    UpperExtras(const esm::Instance& in, BoundModel& bm, const BoundOptions& opt) : in_(in), bm_(bm), opt_(opt)
    {
        A_ = bm.aggregated.assignment.k();
        T_ = static_cast<int>(in.num_time_steps());
        cur_ = in.temporal.current_year_index();
    }

    void add()
    {
        add_internal_transport();
        add_parallel_dc();
        add_merit_caps();
        add_node_needs();
    }

private:
    lp::LinearProgram& lp() { return bm_.model.lp; }
    const cluster::ClusterAssignment& asg() const { return bm_.aggregated.assignment; }

    // Peak internal transfer per product, forced internal expansion and the
    // worst-case internal loss charge.
    void add_internal_transport()
    {
        const std::size_t B = in_.num_products();
        lp::SystemModel& m = bm_.model;
        bm_.max_flow.assign(B, lp::IndexMatrix(A_, std::vector<int>(T_, -1)));
        bm_.loss_factor.assign(B, esm::Series(A_, 0.0));
        m.loss_coefficient.assign(B, esm::Series(A_, 0.0));
        m.loss_base.assign(B, {});
        for (std::size_t bi = 0; bi < B; ++bi) {
            const int b = static_cast<int>(bi);
            if (!in_.products[b].transportable || in_.grid_components_for(b).empty())
                continue;
            m.loss_base[b].assign(A_, std::vector<int>(T_, -1));
            for (int a = 0; a < A_; ++a) {
                const std::vector<int>& internal = asg().internal_edges[a];
                if (internal.empty())
                    continue;
                const std::string& an = m.layout.sites[a].name;
                const int peak = lp().add_variable(lp::key("fmax", {in_.products[b].id, an}), 0.0, lp::kInf, 0.0);
                for (int t = 0; t < T_; ++t) {
                    const std::string& tid = in_.temporal.time_steps[t].id;
                    const int f = lp().add_variable(lp::key("fpeak", {in_.products[b].id, an, tid}), 0.0, lp::kInf, 0.0);
                    bm_.max_flow[b][a][t] = f;
                    std::vector<Term> terms{{f, 1.0}};
                    for (int c : in_.production_components()) {
                        const double theta = in_.components[c].ratio[b];
                        if (theta < 0.0 && m.production[c][a][t] >= 0)
                            terms.push_back({m.production[c][a][t], theta});
                    }
                    append_outflows(terms, b, a, t);
                    lp().add_constraint(lp::key("fdef", {in_.products[b].id, an, tid}), std::move(terms),
                                        Relation::GreaterEqual, bm_.aggregated.demand[b][a][t]);
                    lp().add_constraint(lp::key("fepi", {in_.products[b].id, an, tid}), {{peak, 1.0}, {f, -1.0}},
                                        Relation::GreaterEqual, 0.0);
                }
                for (int l : internal)
                    add_internal_capacity(b, l, peak);
                const double kappa = internal_loss_factor(in_, asg(), a, b, opt_.loss_form);
                bm_.loss_factor[b][a] = kappa;
                if (kappa <= 0.0)
                    continue;
                m.loss_coefficient[b][a] = kappa;
                for (int t = 0; t < T_; ++t) {
                    m.loss_base[b][a][t] = bm_.max_flow[b][a][t];
                    if (m.system_balance[b][t] >= 0)
                        lp().append_term(m.system_balance[b][t], {bm_.max_flow[b][a][t], -kappa});
                }
            }
        }
    }

    // Positive exports of cluster a on its external lines.
    void append_outflows(std::vector<Term>& terms, int b, int a, int t)
    {
        lp::SystemModel& m = bm_.model;
        for (int c : in_.grid_components_for(b)) {
            const esm::Component& comp = in_.components[c];
            const double theta = comp.ratio[b];
            for (const lp::Line& line : m.layout.lines) {
                if (line.from_site != a && line.to_site != a)
                    continue;
                const int l = line.edge;
                const double sigma = line.from_site == a ? 1.0 : -1.0;
                if (comp.is_dc()) {
                    const int f = m.flow[c][l][t];
                    if (f < 0)
                        continue;
                    const std::string name = lp::key("eplus", {comp.id, in_.topology.edges[l].id,
                                                               m.layout.sites[a].name, in_.temporal.time_steps[t].id});
                    const int e = lp().add_variable(name, 0.0, lp::kInf, 0.0);
                    lp().add_constraint(name, {{e, 1.0}, {f, -theta * sigma}}, Relation::GreaterEqual, 0.0);
                    terms.push_back({e, -1.0});
                } else if (m.flow_pos[c][l][t] >= 0) {
                    terms.push_back({sigma > 0 ? m.flow_pos[c][l][t] : m.flow_neg[c][l][t], -theta});
                }
            }
        }
    }

    void add_internal_capacity(int b, int l, int peak)
    {
        lp::SystemModel& m = bm_.model;
        std::vector<Term> terms{{peak, -1.0}};
        double existing = 0.0;
        for (int c : in_.grid_components_for(b)) {
            const esm::Component& comp = in_.components[c];
            const double theta = comp.ratio[b];
            existing += theta * in_.existing_total(c, l);
            int& gv = m.new_grid[c][l];
            const double room = comp.capacity_limit[l] - in_.existing_total(c, l);
            if (gv < 0 && room > 0.0) {
                const double ann = esm::annualized_invest(in_, c, cur_);
                gv = lp().add_variable(lp::key("gnew", {comp.id, in_.topology.edges[l].id}), 0.0, room,
                                       ann * in_.topology.edges[l].length);
            }
            if (gv >= 0)
                terms.push_back({gv, theta});
        }
        lp().add_constraint(lp::key("intcap", {in_.products[b].id, in_.topology.edges[l].id}), std::move(terms),
                            Relation::GreaterEqual, -existing);
    }

    // Every external DC line between the same cluster pair must be able to
    // carry the summed flow of the group on its own.
    void add_parallel_dc()
    {
        lp::SystemModel& m = bm_.model;
        for (int c : in_.grid_components()) {
            const esm::Component& comp = in_.components[c];
            if (!comp.is_dc())
                continue;
            std::map<std::pair<int, int>, std::vector<const lp::Line*>> groups;
            for (const lp::Line& line : m.layout.lines)
                groups[{std::min(line.from_site, line.to_site), std::max(line.from_site, line.to_site)}].push_back(&line);
            for (const auto& [pair, lines] : groups) {
                if (lines.size() < 2)
                    continue;
                for (int t = 0; t < T_; ++t) {
                    std::vector<Term> sum;
                    for (const lp::Line* line : lines) {
                        const double sigma = line->from_site == pair.first ? 1.0 : -1.0;
                        sum.push_back({m.flow[c][line->edge][t], sigma});
                    }
                    for (const lp::Line* line : lines) {
                        const int l = line->edge;
                        const double exist = in_.existing_total(c, l);
                        const int gv = m.new_grid[c][l];
                        for (double dir : {1.0, -1.0}) {
                            std::vector<Term> terms;
                            for (const Term& s : sum)
                                terms.push_back({s.var, dir * s.coef});
                            if (gv >= 0)
                                terms.push_back({gv, -1.0});
                            lp().add_constraint(lp::key(dir > 0 ? "par+" : "par-", {comp.id, in_.topology.edges[l].id,
                                                                                   in_.temporal.time_steps[t].id}),
                                                std::move(terms), Relation::LessEqual, exist);
                        }
                    }
                }
            }
        }
    }

    bool serves_non_transportable(int c) const
    {
        for (std::size_t b = 0; b < in_.num_products(); ++b)
            if (!in_.products[b].transportable && in_.components[c].ratio[b] > 0.0)
                return true;
        return false;
    }

    // Existing capacity of producers of non-transportable products runs only
    // up to its merit-order share at each member node.
    void add_merit_caps()
    {
        lp::SystemModel& m = bm_.model;
        for (int c : in_.production_components()) {
            if (!serves_non_transportable(c))
                continue;
            for (int a = 0; a < A_; ++a) {
                const std::vector<int>& nodes = asg().clusters[a];
                if (nodes.size() < 2 || bm_.aggregated.existing_total(c, a) <= 0.0)
                    continue;
                for (int t = 0; t < T_; ++t) {
                    const int p = m.production[c][a][t];
                    if (p < 0)
                        continue;
                    double cap = 0.0;
                    for (int n : nodes)
                        cap += bm_.merit.share(c, n, t) * in_.availability[c][n][t] * in_.existing_total(c, n);
                    std::vector<Term> terms{{p, 1.0}};
                    if (m.new_capacity[c][a] >= 0)
                        terms.push_back({m.new_capacity[c][a], -bm_.aggregated.availability[c][a][t]});
                    lp().add_constraint(lp::key("merit", {in_.components[c].id, m.layout.sites[a].name,
                                                          in_.temporal.time_steps[t].id}),
                                        std::move(terms), Relation::LessEqual, cap);
                }
            }
        }
    }

    // Per-node capacity need max(delta, lambda) of non-transportable products
    // covered by firm new capacity of the cluster.
    void add_node_needs()
    {
        lp::SystemModel& m = bm_.model;
        const std::size_t B = in_.num_products();
        bm_.node_need.assign(B, std::vector<int>(in_.num_nodes(), -1));
        for (std::size_t bi = 0; bi < B; ++bi) {
            const int b = static_cast<int>(bi);
            if (in_.products[b].transportable)
                continue;
            for (int a = 0; a < A_; ++a) {
                const std::vector<int>& nodes = asg().clusters[a];
                if (nodes.size() < 2)
                    continue;
                const double card = static_cast<double>(nodes.size());
                std::vector<Term> cover;
                for (int c : in_.production_components()) {
                    const esm::Component& comp = in_.components[c];
                    if (comp.ratio[b] <= 0.0 || m.new_capacity[c][a] < 0)
                        continue;
                    const esm::Series& av = bm_.aggregated.availability[c][a];
                    const double firm = std::min(*std::min_element(av.begin(), av.end()), comp.capacity_factor);
                    if (firm > 0.0)
                        cover.push_back({m.new_capacity[c][a], firm * comp.ratio[b]});
                }
                double floor_sum = 0.0;
                std::vector<int> needs;
                for (int n : nodes) {
                    const std::string& nid = in_.topology.nodes[n].id;
                    const double lower = std::max({bm_.gaps.delta[b][n], bm_.gaps.lambda[b][n], 0.0});
                    const int mu = lp().add_variable(lp::key("need", {in_.products[b].id, nid}), lower, lp::kInf, 0.0);
                    bm_.node_need[b][n] = mu;
                    needs.push_back(mu);
                    floor_sum += lower;
                    for (int t = 0; t < T_; ++t) {
                        std::vector<Term> terms{{mu, 1.0}};
                        for (int c : in_.production_components()) {
                            const double theta = in_.components[c].ratio[b];
                            if (theta < 0.0 && m.production[c][a][t] >= 0)
                                terms.push_back({m.production[c][a][t], theta * card});
                        }
                        if (terms.size() == 1)
                            continue;
                        double rhs = in_.demand[b][n][t];
                        for (int c : in_.production_components()) {
                            const esm::Component& comp = in_.components[c];
                            if (comp.ratio[b] > 0.0)
                                rhs -= comp.ratio[b] * bm_.merit.share(c, n, t) * in_.availability[c][n][t] *
                                       in_.existing_total(c, n);
                        }
                        lp().add_constraint(lp::key("needt", {in_.products[b].id, nid, in_.temporal.time_steps[t].id}),
                                            std::move(terms), Relation::GreaterEqual, rhs);
                    }
                }
                if (floor_sum <= 0.0 && needs.empty())
                    continue;
                std::vector<Term> terms = cover;
                for (int mu : needs)
                    terms.push_back({mu, -1.0});
                lp().add_constraint(lp::key("needsum", {in_.products[b].id, m.layout.sites[a].name}), std::move(terms),
                                    Relation::GreaterEqual, 0.0);
            }
        }
    }

    const esm::Instance& in_;
    BoundModel& bm_;
    const BoundOptions& opt_;
    int A_ = 0, T_ = 0;
    std::size_t cur_ = 0;
};

} // namespace

double internal_loss_factor(const esm::Instance& in, const cluster::ClusterAssignment& asg, int a, int b, LossForm form)
{
    double sum = 0.0, retained = 1.0;
    for (int l : asg.internal_edges[a]) {
        bool any = false;
        const double eta = min_efficiency(in, b, l, &any);
        if (!any)
            continue;
        const double x = (1.0 - eta) * in.topology.edges[l].length;
        sum += x;
        retained *= std::max(0.0, 1.0 - x);
    }
    return form == LossForm::Sum ? sum : 1.0 - retained;
}

BoundModel build_lb_lp(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions&)
{
    BoundModel bm;
    bm.kind = BoundKind::Lower;
    bm.aggregated = aggregate_parameters(instance, assignment, BoundKind::Lower);
    bm.model = lp::build_system_model(
        instance, cluster_spec(instance, bm.aggregated, cluster_layout(instance, assignment, BoundKind::Lower)));
    return bm;
}

BoundModel build_ub_lp(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions& options)
{
    BoundModel bm;
    bm.kind = BoundKind::Upper;
    bm.aggregated = aggregate_parameters(instance, assignment, BoundKind::Upper);
    bm.merit = options.merit_order ? merit_order(instance) : unrestricted_merit_order(instance);
    bm.gaps = secured_gaps(instance, bm.merit);
    bm.model = lp::build_system_model(
        instance, cluster_spec(instance, bm.aggregated, cluster_layout(instance, assignment, BoundKind::Upper)));
    UpperExtras(instance, bm, options).add();
    return bm;
}

BoundSolution solve_bound(const esm::Instance& instance, const BoundModel& bound, const lp::SolverOptions& options)
{
    BoundSolution out;
    const lp::SolveResult r = lp::solve(bound.model.lp, options);
    out.status = r.status;
    out.wall_time = r.wall_time;
    out.iterations = r.iteration_count;
    if (r.optimal()) {
        out.solution = lp::extract_solution(instance, bound.model, r);
        out.tac = out.solution.tac;
        if (!bound.max_flow.empty()) {
            out.peak_flow.resize(bound.max_flow.size());
            for (std::size_t b = 0; b < bound.max_flow.size(); ++b)
                for (const std::vector<int>& vars : bound.max_flow[b]) {
                    esm::Series series;
                    for (int v : vars)
                        series.push_back(v >= 0 ? r.primal_values[v] : 0.0);
                    out.peak_flow[b].push_back(std::move(series));
                }
        }
    }
    return out;
}

BoundPair solve_bounds(const esm::Instance& instance, const cluster::ClusterAssignment& assignment,
                       const BoundOptions& options, const lp::SolverOptions& solver, int jobs)
{
    using clock = std::chrono::steady_clock;
    BoundPair out;
    auto run = [&](bool upper) {
        const auto start = clock::now();
        BoundModel& model = upper ? out.ub_model : out.lb_model;
        model = upper ? build_ub_lp(instance, assignment, options) : build_lb_lp(instance, assignment, options);
        BoundSolution& sol = upper ? out.ub : out.lb;
        sol = solve_bound(instance, model, solver);
        sol.wall_time = std::chrono::duration<double>(clock::now() - start).count();
    };
    const int threads = std::min(2, resolve_jobs(jobs));
    // Exceptions must not cross the parallel region; rethrow afterwards.
    std::exception_ptr errors[2];
#pragma omp parallel for num_threads(threads) schedule(static, 1)
    for (int i = 0; i < 2; ++i) {
        try {
            run(i == 1);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

} // namespace sparta::bounds
