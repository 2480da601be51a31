#pragma once

#include "sparta/esm/instance.hpp"

namespace sparta::esm {

// Discounting horizon of a component: the shorter of lifetime and discounting period.
int discount_horizon(int lifetime, int discount_period);

// Annuity factor ((1+i)^h - 1) / ((1+i)^h i); the i -> 0 limit h is returned for i = 0.
double npv_factor(double interest_rate, double horizon);

// Investment cost of one reference unit built in year `year_index`, spread over one year.
// Grid components are priced per unit length; multiply by the line length.
double annualized_invest(const Instance& instance, int component, std::size_t year_index);

// Annualized CAPEX of capacity that already exists at a node (production) or edge (grid).
double existing_capex(const Instance& instance, int component, int location);

} // namespace sparta::esm
