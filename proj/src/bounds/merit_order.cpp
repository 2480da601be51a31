#include "sparta/bounds/merit_order.hpp"

#include <algorithm>
#include <cmath>

#include "sparta/common/error.hpp"

namespace sparta::bounds {

bool MeritOrderTable::empty() const
{
    return std::all_of(usable_share.begin(), usable_share.end(), [](const esm::Tensor3& t) { return t.empty(); });
}

double MeritOrderTable::share(int component, int node, int t) const
{
    double out = 1.0;
    for (const esm::Tensor3& product : usable_share)
        if (!product.empty() && !product[component].empty())
            out = std::min(out, product[component][node][t]);
    return out;
}

namespace {

bool buildable(const esm::Instance& in, int c)
{
    for (std::size_t n = 0; n < in.num_nodes(); ++n)
        if (in.components[c].capacity_limit[n] - in.existing_total(c, static_cast<int>(n)) > 0.0)
            return true;
    return false;
}

MeritOrderTable make_table(const esm::Instance& in, bool restricted)
{
    const std::size_t B = in.num_products(), C = in.num_components(), N = in.num_nodes(), T = in.num_time_steps();
    MeritOrderTable table;
    table.reference_op_cost.assign(B, esm::kInfinity);
    table.usable_share.assign(B, {});
    for (std::size_t b = 0; b < B; ++b) {
        if (in.products[b].transportable)
            continue;
        std::vector<int> producers;
        bool any_buildable = false;
        for (int c : in.production_components()) {
            if (in.components[c].ratio[b] <= 0.0)
                continue;
            producers.push_back(c);
            if (buildable(in, c)) {
                any_buildable = true;
                table.reference_op_cost[b] = std::min(table.reference_op_cost[b], in.components[c].op_cost);
            }
        }
        if (any_buildable && !std::isfinite(table.reference_op_cost[b]))
            throw ConfigurationError("no finite operating cost among buildable producers of " + in.products[b].id);
        // Ascending operating cost; ties keep declaration order.
        std::stable_sort(producers.begin(), producers.end(),
                         [&](int x, int y) { return in.components[x].op_cost < in.components[y].op_cost; });

        esm::Tensor3& share = table.usable_share[b];
        share.assign(C, {});
        for (int c : producers)
            share[c].assign(N, esm::Series(T, restricted ? 0.0 : 1.0));
        if (!restricted)
            continue;
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t t = 0; t < T; ++t) {
                double remaining = in.demand[b][n][t];
                for (int c : producers) {
                    const esm::Component& comp = in.components[c];
                    if (comp.op_cost > table.reference_op_cost[b])
                        break;
                    const double usable = in.availability[c][n][t] * comp.ratio[b] * in.existing_total(c, static_cast<int>(n));
                    if (usable <= 0.0)
                        continue;
                    const double take = std::min(remaining, usable);
                    share[c][n][t] = take / usable;
                    remaining -= take;
                }
            }
    }
    return table;
}

} // namespace

MeritOrderTable merit_order(const esm::Instance& instance)
{
    return make_table(instance, true);
}

MeritOrderTable unrestricted_merit_order(const esm::Instance& instance)
{
    return make_table(instance, false);
}

SecuredCapacityGap secured_gaps(const esm::Instance& in, const MeritOrderTable& merit)
{
    const std::size_t B = in.num_products(), N = in.num_nodes(), T = in.num_time_steps();
    SecuredCapacityGap gap;
    gap.delta.assign(B, {});
    gap.lambda.assign(B, {});
    for (std::size_t b = 0; b < B; ++b) {
        if (in.products[b].transportable)
            continue;
        gap.delta[b].assign(N, 0.0);
        gap.lambda[b].assign(N, 0.0);
        for (std::size_t n = 0; n < N; ++n) {
            const int node = static_cast<int>(n);
            double delta = in.products[b].secured_capacity_nodal[n];
            for (int c : in.production_components()) {
                const esm::Component& comp = in.components[c];
                delta -= comp.capacity_factor * comp.ratio[b] * in.existing_total(c, node);
            }
            gap.delta[b][n] = delta;
            double lambda = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                double need = in.demand[b][n][t];
                for (int c : in.production_components()) {
                    const esm::Component& comp = in.components[c];
                    // Consumers are covered by the endogenous term of the upper-bound model.
                    if (comp.ratio[b] <= 0.0)
                        continue;
                    const double share = merit.usable_share[b].empty() || merit.usable_share[b][c].empty()
                                             ? 1.0
                                             : merit.usable_share[b][c][n][t];
                    need -= comp.ratio[b] * share * in.availability[c][n][t] * in.existing_total(c, node);
                }
                lambda = std::max(lambda, need);
            }
            gap.lambda[b][n] = lambda;
        }
    }
    return gap;
}

double forced_internal_expansion(double peak_flow, double existing_capacity)
{
    return std::max(0.0, peak_flow - existing_capacity);
}

} // namespace sparta::bounds
