#include "sparta/lp/solution_io.hpp"

#include <fstream>

#include "sparta/common/error.hpp"

namespace sparta::lp {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(std::string("solution document lacks '") + key + "'");
    return *it;
}

// Keyed by component (or product) id, then by site or edge index.
template <class Tensor>
json keyed(const std::vector<std::string>& ids, const Tensor& data)
{
    json out = json::object();
    for (std::size_t i = 0; i < ids.size() && i < data.size(); ++i)
        if (!data[i].empty())
            out[ids[i]] = data[i];
    return out;
}

template <class Tensor>
void unkeyed(const json& j, const std::vector<std::string>& ids, Tensor& data)
{
    data.assign(ids.size(), {});
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = j.find(ids[i]);
        if (it != j.end())
            it->get_to(data[i]);
    }
}

} // namespace

json solution_to_json(const esm::Instance& in, const SystemSolution& sol)
{
    std::vector<std::string> comps, prods;
    for (const esm::Component& c : in.components)
        comps.push_back(c.id);
    for (const esm::Product& p : in.products)
        prods.push_back(p.id);
    json sites = json::array();
    for (std::size_t s = 0; s < sol.sites.size(); ++s) {
        json nodes = json::array();
        for (int n : sol.site_nodes[s])
            nodes.push_back(in.topology.nodes[n].id);
        sites.push_back({{"id", sol.sites[s]}, {"nodes", nodes}});
    }
    json edges = json::array();
    for (const esm::Edge& e : in.topology.edges)
        edges.push_back(e.id);
    json modelled = json::array();
    for (bool b : sol.edge_modelled)
        modelled.push_back(b);
    return {
        {"schema", kSolutionSchema},
        {"sites", sites},
        {"edges", edges},
        {"edge_modelled", modelled},
        {"capacity_expansion", keyed(comps, sol.capacity_expansion)},
        {"grid_expansion", keyed(comps, sol.grid_expansion)},
        {"production", keyed(comps, sol.production)},
        {"flows", keyed(comps, sol.flows)},
        {"angles", keyed(comps, sol.angles)},
        {"imports", keyed(prods, sol.imports)},
        {"site_imports", keyed(prods, sol.site_imports)},
        {"exports", keyed(prods, sol.exports)},
        {"internal_loss", keyed(prods, sol.internal_loss)},
        {"tac", sol.tac},
        {"capex_prod", sol.capex_prod},
        {"capex_grid", sol.capex_grid},
        {"opex", sol.opex},
        {"ghg", sol.ghg},
        {"site_ghg", sol.site_ghg},
        {"objective_value", sol.objective_value},
    };
}

SystemSolution solution_from_json(const esm::Instance& in, const json& doc)
{
    if (require(doc, "schema") != kSolutionSchema)
        throw FormatError("unsupported solution schema");
    std::vector<std::string> comps, prods;
    for (const esm::Component& c : in.components)
        comps.push_back(c.id);
    for (const esm::Product& p : in.products)
        prods.push_back(p.id);
    SystemSolution sol;
    try {
        for (const json& s : require(doc, "sites")) {
            sol.sites.push_back(require(s, "id").get<std::string>());
            std::vector<int> nodes;
            for (const json& n : require(s, "nodes")) {
                const int idx = in.node_index(n.get<std::string>());
                if (idx < 0)
                    throw FormatError("unknown node in solution document");
                nodes.push_back(idx);
            }
            sol.site_nodes.push_back(nodes);
        }
        require(doc, "edge_modelled").get_to(sol.edge_modelled);
        unkeyed(require(doc, "capacity_expansion"), comps, sol.capacity_expansion);
        unkeyed(require(doc, "grid_expansion"), comps, sol.grid_expansion);
        unkeyed(require(doc, "production"), comps, sol.production);
        unkeyed(require(doc, "flows"), comps, sol.flows);
        unkeyed(require(doc, "angles"), comps, sol.angles);
        unkeyed(require(doc, "imports"), prods, sol.imports);
        unkeyed(require(doc, "site_imports"), prods, sol.site_imports);
        unkeyed(require(doc, "exports"), prods, sol.exports);
        unkeyed(require(doc, "internal_loss"), prods, sol.internal_loss);
        sol.tac = require(doc, "tac").get<double>();
        sol.capex_prod = require(doc, "capex_prod").get<double>();
        sol.capex_grid = require(doc, "capex_grid").get<double>();
        sol.opex = require(doc, "opex").get<double>();
        sol.ghg = require(doc, "ghg").get<double>();
        require(doc, "site_ghg").get_to(sol.site_ghg);
        sol.objective_value = require(doc, "objective_value").get<double>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed solution document: ") + e.what());
    }
    return sol;
}

void write_solution_file(const std::string& path, const esm::Instance& instance, const SystemSolution& solution)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << solution_to_json(instance, solution).dump(2) << '\n';
}

SystemSolution read_solution_file(const std::string& path, const esm::Instance& instance)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed solution document: ") + e.what());
    }
    return solution_from_json(instance, doc);
}

} // namespace sparta::lp
