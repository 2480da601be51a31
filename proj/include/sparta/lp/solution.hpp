#pragma once

#include <string>
#include <vector>

#include "sparta/esm/instance.hpp"
#include "sparta/lp/simplex.hpp"
#include "sparta/lp/system_model.hpp"

namespace sparta::lp {

// Optimal design and operation read back from a solved model. Site-indexed
// fields refer to the model's sites (nodes for nodal models, clusters for
// aggregated ones); edge-indexed fields cover every topology edge.
struct SystemSolution {
    std::vector<std::string> sites;
    std::vector<std::vector<int>> site_nodes;
    esm::Matrix capacity_expansion;  // [component][site]
    esm::Matrix grid_expansion;      // [component][edge]
    esm::Tensor3 production;         // [component][site][t]
    esm::Tensor3 site_imports;       // [product][site][t]
    esm::Matrix imports;             // [product][t]
    esm::Tensor3 flows;              // [component][edge][t]
    esm::Tensor3 exports;            // [product][site][t]
    esm::Tensor3 angles;             // [component][edge][t], potential difference of DC lines
    esm::Tensor3 internal_loss;      // [product][site][t], aggregated models only
    std::vector<bool> edge_modelled;
    double tac = 0.0;
    double capex_prod = 0.0;
    double capex_grid = 0.0;
    double opex = 0.0;
    double ghg = 0.0;
    std::vector<double> site_ghg;
    double objective_value = 0.0;
};

// Reads the primal values into a SystemSolution and recomputes the cost terms
// independently of the solver objective. Throws SolutionMismatchError if the
// two disagree by more than 1e-7 relative.
SystemSolution extract_solution(const esm::Instance& instance, const SystemModel& model, const SolveResult& result);

// Annual emissions of a production schedule.
double emissions_of(const esm::Instance& instance, const esm::Tensor3& production);

} // namespace sparta::lp
