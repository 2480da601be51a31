#include "sparta/esm/economics.hpp"

#include <algorithm>
#include <cmath>

namespace sparta::esm {

int discount_horizon(int lifetime, int discount_period)
{
    return std::min(lifetime, discount_period);
}

double npv_factor(double interest_rate, double horizon)
{
    if (interest_rate == 0.0)
        return horizon;
    // expm1/log1p keep the small-rate regime accurate.
    const double growth_minus_one = std::expm1(horizon * std::log1p(interest_rate));
    const double growth = growth_minus_one + 1.0;
    return growth_minus_one / (growth * interest_rate);
}

double annualized_invest(const Instance& instance, int component, std::size_t year_index)
{
    const Component& c = instance.components[component];
    const double beta = npv_factor(instance.interest_rate, discount_horizon(c.lifetime, c.discount_period));
    return c.invest_cost[year_index] / beta;
}

double existing_capex(const Instance& instance, int component, int location)
{
    const Component& c = instance.components[component];
    const Series& years = instance.existing_capacity[component][location];
    double sum = 0.0;
    for (std::size_t y = 0; y < years.size(); ++y)
        sum += annualized_invest(instance, component, y) * years[y];
    if (c.is_grid())
        sum *= instance.topology.edges[location].length;
    return sum;
}

} // namespace sparta::esm
