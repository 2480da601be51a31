#pragma once

#include "sparta/esm/instance.hpp"

namespace sparta::testkit {

// One node, one product, one generator with annualized invest 50 and op cost
// 0.1 over a single 8760 h time step.
esm::Instance single_node(double demand);

// Two nodes joined by one DC line (s = 1, existing capacity 5, no expansion);
// generation only at n1, demand 4 at n2.
esm::Instance dc_two_node();

// Two nodes and a transshipment line with the given existing capacity and
// efficiency per unit length; cheap generation at n1, expensive at n2.
esm::Instance transship_two_node(double line_capacity, double efficiency, double length);

// Three nodes joined by DC lines l12, l13 (capacity 2, fixed) and l23
// (capacity 0.5, expandable), all with s = 1; generation only at n1, demand 3
// at n3. Kirchhoff's voltage law routes a third of the supply over l12 and l23,
// so the optimum expands l23 to 1.
esm::Instance dc_triangle();

// One node with a non-transportable product "heat" and a single existing
// producer; an expandable backup producer sets the merit-order reference.
esm::Instance heat_node(double existing, double secured, double demand_peak);

} // namespace sparta::testkit
