#include "sparta/lp/full_model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "sparta/common/error.hpp"

namespace sparta::lp {

std::vector<int> unreachable_demand_nodes(const esm::Instance& in, int b)
{
    const int N = static_cast<int>(in.num_nodes());
    std::vector<char> reached(N, 0);
    std::vector<int> queue;
    for (int n = 0; n < N; ++n) {
        bool source = in.products[b].import_allowed;
        for (int c : in.production_components()) {
            const esm::Component& comp = in.components[c];
            if (source)
                break;
            if (comp.ratio[b] <= 0.0)
                continue;
            const bool capacity = comp.capacity_limit[n] > 0.0 || in.existing_total(c, n) > 0.0;
            bool available = false;
            for (double a : in.availability[c][n])
                available = available || a > 0.0;
            source = capacity && available;
        }
        if (source) {
            reached[n] = 1;
            queue.push_back(n);
        }
    }
    const std::vector<int> carriers = in.grid_components_for(b);
    const auto incidence = in.topology.incidence();
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int n = queue[head];
        for (int l : incidence[n]) {
            bool usable = false;
            for (int c : carriers)
                usable = usable || in.components[c].capacity_limit[l] > 0.0 || in.existing_total(c, l) > 0.0;
            if (!usable)
                continue;
            const esm::Edge& e = in.topology.edges[l];
            const int m = e.from == n ? e.to : e.from;
            if (!reached[m]) {
                reached[m] = 1;
                queue.push_back(m);
            }
        }
    }
    std::vector<int> out;
    for (int n = 0; n < N; ++n) {
        if (reached[n])
            continue;
        double peak = 0.0;
        for (double d : in.demand[b][n])
            peak = std::max(peak, d);
        if (peak > 0.0)
            out.push_back(n);
    }
    return out;
}

SystemModel build_full_lp(const esm::Instance& instance)
{
    for (std::size_t b = 0; b < instance.num_products(); ++b) {
        const std::vector<int> bad = unreachable_demand_nodes(instance, static_cast<int>(b));
        if (bad.empty())
            continue;
        std::ostringstream msg;
        msg << "demand for product " << instance.products[b].id << " cannot be supplied at node";
        for (int n : bad)
            msg << ' ' << instance.topology.nodes[n].id;
        throw InfeasibleError(msg.str());
    }
    std::vector<int> nodes(instance.num_nodes());
    std::iota(nodes.begin(), nodes.end(), 0);
    return build_system_model(instance, nodal_spec(instance, nodal_layout(instance, nodes)));
}

} // namespace sparta::lp
