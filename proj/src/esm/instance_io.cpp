#include "sparta/esm/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparta/common/error.hpp"

namespace sparta::esm {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(std::string("missing key '") + key + "'");
    return *it;
}

// Unbounded quantities are written as null; strings "inf"/"infinity" are accepted on input.
double read_number(const json& j)
{
    if (j.is_null())
        return kInfinity;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity")
            return kInfinity;
        throw FormatError("expected a number, found string '" + s + "'");
    }
    if (!j.is_number())
        throw FormatError("expected a number");
    return j.get<double>();
}

json write_number(double v)
{
    if (std::isinf(v) && v > 0)
        return nullptr;
    return v;
}

double number_or(const json& j, const char* key, double fallback)
{
    auto it = j.find(key);
    return it == j.end() ? fallback : read_number(*it);
}

Series read_series(const json& j)
{
    if (!j.is_array())
        throw FormatError("expected an array");
    Series out;
    out.reserve(j.size());
    for (const json& v : j)
        out.push_back(read_number(v));
    return out;
}

Matrix read_matrix(const json& j)
{
    if (!j.is_array())
        throw FormatError("expected an array of arrays");
    Matrix out;
    for (const json& row : j)
        out.push_back(read_series(row));
    return out;
}

json write_series(const Series& s)
{
    json out = json::array();
    for (double v : s)
        out.push_back(write_number(v));
    return out;
}

json write_matrix(const Matrix& m)
{
    json out = json::array();
    for (const Series& s : m)
        out.push_back(write_series(s));
    return out;
}

template <typename Lookup>
int lookup_or_throw(Lookup lookup, const std::string& id, const char* what)
{
    const int index = lookup(id);
    if (index < 0)
        throw FormatError(std::string("unknown ") + what + " '" + id + "'");
    return index;
}

Instance from_json(const json& doc)
{
    if (!doc.is_object())
        throw FormatError("instance document must be an object");
    const json& schema = require(doc, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kInstanceSchema)
        throw FormatError(std::string("unsupported schema, expected '") + kInstanceSchema + "'");

    Instance in;
    for (const json& n : require(doc, "nodes"))
        in.topology.nodes.push_back({require(n, "id").get<std::string>(), read_number(require(n, "x")),
                                     read_number(require(n, "y"))});
    auto node_of = [&](const std::string& id) { return in.node_index(id); };
    for (const json& e : require(doc, "edges")) {
        Edge edge;
        edge.id = require(e, "id").get<std::string>();
        edge.from = lookup_or_throw(node_of, require(e, "from").get<std::string>(), "node");
        edge.to = lookup_or_throw(node_of, require(e, "to").get<std::string>(), "node");
        edge.length = read_number(require(e, "length"));
        in.topology.edges.push_back(edge);
    }
    for (const json& t : require(doc, "time_steps"))
        in.temporal.time_steps.push_back({require(t, "id").get<std::string>(), read_number(require(t, "duration")),
                                          read_number(require(t, "weight"))});
    for (const json& y : require(doc, "investment_years"))
        in.temporal.investment_years.push_back(y.get<int>());

    const std::size_t nn = in.num_nodes();
    const std::size_t ne = in.num_edges();
    for (const json& p : require(doc, "products")) {
        Product product;
        product.id = require(p, "id").get<std::string>();
        product.transportable = require(p, "transportable").get<bool>();
        product.import_allowed = p.value("import_allowed", false);
        if (p.contains("import_cost"))
            product.import_cost = read_series(p["import_cost"]);
        else
            product.import_cost.assign(in.num_time_steps(), 0.0);
        product.secured_capacity_nodal.assign(nn, 0.0);
        if (p.contains("secured_capacity_nodal"))
            for (const auto& [node, value] : p["secured_capacity_nodal"].items())
                product.secured_capacity_nodal[lookup_or_throw(node_of, node, "node")] = read_number(value);
        if (p.contains("secured_capacity_system") && !p["secured_capacity_system"].is_null())
            product.secured_capacity_system = read_number(p["secured_capacity_system"]);
        in.products.push_back(std::move(product));
    }
    auto product_of = [&](const std::string& id) { return in.product_index(id); };
    auto edge_of = [&](const std::string& id) { return in.edge_index(id); };

    for (const json& c : require(doc, "components")) {
        Component comp;
        comp.id = require(c, "id").get<std::string>();
        const std::string kind = require(c, "kind").get<std::string>();
        if (kind == "production")
            comp.kind = ComponentKind::Production;
        else if (kind == "grid")
            comp.kind = ComponentKind::Grid;
        else
            throw FormatError("unknown component kind '" + kind + "'");
        comp.ratio.assign(in.num_products(), 0.0);
        for (const auto& [product, value] : require(c, "ratio").items())
            comp.ratio[lookup_or_throw(product_of, product, "product")] = read_number(value);
        comp.invest_cost = read_series(require(c, "invest_cost"));
        comp.op_cost = number_or(c, "op_cost", 0.0);
        comp.op_emission = number_or(c, "op_emission", 0.0);
        comp.lifetime = require(c, "lifetime").get<int>();
        comp.discount_period = require(c, "discount_period").get<int>();
        comp.capacity_factor = number_or(c, "capacity_factor", 0.0);
        comp.system_capacity_limit = number_or(c, "system_capacity_limit", kInfinity);
        comp.capacity_limit.assign(comp.is_production() ? nn : ne, kInfinity);
        if (c.contains("capacity_limit"))
            for (const auto& [location, value] : c["capacity_limit"].items()) {
                const int index = comp.is_production() ? lookup_or_throw(node_of, location, "node")
                                                       : lookup_or_throw(edge_of, location, "edge");
                comp.capacity_limit[index] = read_number(value);
            }
        if (comp.is_grid()) {
            comp.efficiency = number_or(c, "efficiency", 1.0);
            comp.susceptance = number_or(c, "susceptance", 1.0);
            const std::string mode = c.value("transport_mode", std::string("transshipment"));
            if (mode == "transshipment")
                comp.mode = TransportMode::Transshipment;
            else if (mode == "dc-load-flow")
                comp.mode = TransportMode::DcLoadFlow;
            else
                throw FormatError("unknown transport mode '" + mode + "'");
        }
        in.components.push_back(std::move(comp));
    }
    auto component_of = [&](const std::string& id) { return in.component_index(id); };

    allocate_series(in);
    const json& demand = require(doc, "demand");
    for (std::size_t b = 0; b < in.num_products(); ++b) {
        auto it = demand.find(in.products[b].id);
        in.demand[b] = it == demand.end() ? Matrix() : read_matrix(*it);
    }
    for (const auto& [id, value] : demand.items())
        lookup_or_throw(product_of, id, "product");

    const json& availability = require(doc, "availability");
    for (std::size_t c = 0; c < in.num_components(); ++c) {
        if (!in.components[c].is_production())
            continue;
        auto it = availability.find(in.components[c].id);
        in.availability[c] = it == availability.end() ? Matrix() : read_matrix(*it);
    }
    for (const auto& [id, value] : availability.items())
        lookup_or_throw(component_of, id, "component");

    // Existing capacity may be omitted per component, meaning none.
    for (const auto& [id, value] : require(doc, "existing_capacity").items())
        in.existing_capacity[lookup_or_throw(component_of, id, "component")] = read_matrix(value);

    in.ghg_limit = read_number(require(doc, "ghg_limit"));
    in.interest_rate = read_number(require(doc, "interest_rate"));
    return in;
}

json to_json(const Instance& in)
{
    json doc;
    doc["schema"] = kInstanceSchema;
    json products = json::array();
    for (const Product& p : in.products) {
        json j;
        j["id"] = p.id;
        j["transportable"] = p.transportable;
        j["import_allowed"] = p.import_allowed;
        j["import_cost"] = write_series(p.import_cost);
        json secured = json::object();
        for (std::size_t n = 0; n < p.secured_capacity_nodal.size(); ++n)
            if (p.secured_capacity_nodal[n] != 0.0)
                secured[in.topology.nodes[n].id] = p.secured_capacity_nodal[n];
        j["secured_capacity_nodal"] = secured;
        if (p.secured_capacity_system)
            j["secured_capacity_system"] = *p.secured_capacity_system;
        products.push_back(j);
    }
    doc["products"] = products;

    json components = json::array();
    for (const Component& c : in.components) {
        json j;
        j["id"] = c.id;
        j["kind"] = c.is_production() ? "production" : "grid";
        json ratio = json::object();
        for (std::size_t b = 0; b < c.ratio.size(); ++b)
            if (c.ratio[b] != 0.0)
                ratio[in.products[b].id] = c.ratio[b];
        j["ratio"] = ratio;
        j["invest_cost"] = write_series(c.invest_cost);
        j["op_cost"] = c.op_cost;
        j["op_emission"] = c.op_emission;
        j["lifetime"] = c.lifetime;
        j["discount_period"] = c.discount_period;
        j["capacity_factor"] = c.capacity_factor;
        j["system_capacity_limit"] = write_number(c.system_capacity_limit);
        json limits = json::object();
        for (std::size_t loc = 0; loc < c.capacity_limit.size(); ++loc) {
            if (std::isinf(c.capacity_limit[loc]))
                continue;
            const std::string& id = c.is_production() ? in.topology.nodes[loc].id : in.topology.edges[loc].id;
            limits[id] = c.capacity_limit[loc];
        }
        j["capacity_limit"] = limits;
        if (c.is_grid()) {
            j["efficiency"] = c.efficiency;
            j["susceptance"] = c.susceptance;
            j["transport_mode"] = c.mode == TransportMode::DcLoadFlow ? "dc-load-flow" : "transshipment";
        }
        components.push_back(j);
    }
    doc["components"] = components;

    json nodes = json::array();
    for (const Node& n : in.topology.nodes)
        nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}});
    doc["nodes"] = nodes;
    json edges = json::array();
    for (const Edge& e : in.topology.edges)
        edges.push_back({{"id", e.id},
                         {"from", in.topology.nodes[e.from].id},
                         {"to", in.topology.nodes[e.to].id},
                         {"length", e.length}});
    doc["edges"] = edges;
    json steps = json::array();
    for (const TimeStep& t : in.temporal.time_steps)
        steps.push_back({{"id", t.id}, {"duration", t.duration}, {"weight", t.weight}});
    doc["time_steps"] = steps;
    doc["investment_years"] = in.temporal.investment_years;

    json demand = json::object();
    for (std::size_t b = 0; b < in.num_products(); ++b)
        demand[in.products[b].id] = write_matrix(in.demand[b]);
    doc["demand"] = demand;
    json availability = json::object();
    json existing = json::object();
    for (std::size_t c = 0; c < in.num_components(); ++c) {
        if (in.components[c].is_production())
            availability[in.components[c].id] = write_matrix(in.availability[c]);
        existing[in.components[c].id] = write_matrix(in.existing_capacity[c]);
    }
    doc["availability"] = availability;
    doc["existing_capacity"] = existing;
    doc["ghg_limit"] = write_number(in.ghg_limit);
    doc["interest_rate"] = in.interest_rate;
    return doc;
}

} // namespace

Instance read_instance(std::istream& in)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed instance document: ") + e.what());
    }
    try {
        return from_json(doc);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed instance document: ") + e.what());
    }
}

Instance read_instance_file(const std::string& path)
{
    std::ifstream file(path);
    if (!file)
        throw FormatError("cannot open instance file '" + path + "'");
    return read_instance(file);
}

Instance parse_instance(const std::string& text)
{
    std::istringstream in(text);
    return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance)
{
    out << to_json(instance).dump(2) << '\n';
}

void write_instance_file(const std::string& path, const Instance& instance)
{
    std::ofstream file(path);
    if (!file)
        throw FormatError("cannot write instance file '" + path + "'");
    write_instance(file, instance);
}

std::string dump_instance(const Instance& instance)
{
    std::ostringstream out;
    write_instance(out, instance);
    return out.str();
}

} // namespace sparta::esm
