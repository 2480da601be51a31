#include "sparta/app/report_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "sparta/common/error.hpp"

namespace sparta::app {

using nlohmann::json;

namespace {

json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json optional(const std::optional<double>& v)
{
    return v ? number(*v) : json(nullptr);
}

double read_number(const json& doc, const char* key)
{
    if (!doc.contains(key))
        throw FormatError(std::string("report field '") + key + "' is missing");
    const json& v = doc.at(key);
    if (v.is_null())
        return std::numeric_limits<double>::infinity();
    if (!v.is_number())
        throw FormatError(std::string("report field '") + key + "' must be a number");
    return v.get<double>();
}

std::optional<double> read_optional(const json& doc, const char* key)
{
    if (!doc.contains(key) || doc.at(key).is_null())
        return std::nullopt;
    return read_number(doc, key);
}

} // namespace

json report_to_json(const ComparisonReport& r)
{
    json doc;
    doc["schema"] = kReportSchema;
    doc["tac_full"] = optional(r.tac_full);
    doc["tac_lb"] = number(r.tac_lb);
    doc["tac_ub"] = number(r.tac_ub);
    doc["tac_redesign"] = number(r.tac_redesign);
    doc["tac_operational"] = optional(r.tac_operational);
    doc["tac_network"] = optional(r.tac_network);
    doc["tac_final"] = number(r.tac_final);
    doc["epsilon_ub"] = number(r.epsilon_ub);
    doc["epsilon_redesign"] = number(r.epsilon_redesign);
    doc["epsilon_final"] = number(r.epsilon_final);
    doc["epsilon_full"] = optional(r.epsilon_full);
    doc["iterations"] = r.iterations;
    doc["k_final"] = r.k_final;
    doc["termination"] = r.termination;
    doc["operational_feasible"] = r.operational_feasible;
    doc["network_optimized"] = r.network_optimized;
    doc["wall_time_s"] = {{"iterations", r.wall_iterations},   {"redesign", r.wall_redesign},
                          {"operational", r.wall_operational}, {"network", r.wall_network},
                          {"sparta", r.wall_sparta},           {"full", optional(r.wall_full)}};
    doc["speedup"] = optional(r.speedup);
    json clusters = json::array();
    for (const ClusterReport& c : r.clusters)
        clusters.push_back({{"cluster", c.cluster},
                            {"nodes", c.nodes},
                            {"tac", c.tac},
                            {"ghg", c.ghg},
                            {"ghg_budget", number(c.ghg_budget)},
                            {"internal_expansion", c.internal_expansion}});
    doc["clusters"] = clusters;
    return doc;
}

ComparisonReport report_from_json(const json& doc)
{
    if (!doc.is_object() || doc.value("schema", "") != kReportSchema)
        throw FormatError(std::string("report document must declare schema ") + kReportSchema);
    ComparisonReport r;
    try {
        r.tac_full = read_optional(doc, "tac_full");
        r.tac_lb = read_number(doc, "tac_lb");
        r.tac_ub = read_number(doc, "tac_ub");
        r.tac_redesign = read_number(doc, "tac_redesign");
        r.tac_operational = read_optional(doc, "tac_operational");
        r.tac_network = read_optional(doc, "tac_network");
        r.tac_final = read_number(doc, "tac_final");
        r.epsilon_ub = read_number(doc, "epsilon_ub");
        r.epsilon_redesign = read_number(doc, "epsilon_redesign");
        r.epsilon_final = read_number(doc, "epsilon_final");
        r.epsilon_full = read_optional(doc, "epsilon_full");
        r.iterations = doc.at("iterations").get<int>();
        r.k_final = doc.at("k_final").get<int>();
        r.termination = doc.at("termination").get<std::string>();
        r.operational_feasible = doc.at("operational_feasible").get<bool>();
        r.network_optimized = doc.at("network_optimized").get<bool>();
        const json& w = doc.at("wall_time_s");
        r.wall_iterations = read_number(w, "iterations");
        r.wall_redesign = read_number(w, "redesign");
        r.wall_operational = read_number(w, "operational");
        r.wall_network = read_number(w, "network");
        r.wall_sparta = read_number(w, "sparta");
        r.wall_full = read_optional(w, "full");
        r.speedup = read_optional(doc, "speedup");
        for (const json& c : doc.at("clusters")) {
            ClusterReport cr;
            cr.cluster = c.at("cluster").get<std::string>();
            cr.nodes = c.at("nodes").get<int>();
            cr.tac = read_number(c, "tac");
            cr.ghg = read_number(c, "ghg");
            cr.ghg_budget = read_number(c, "ghg_budget");
            cr.internal_expansion = read_number(c, "internal_expansion");
            r.clusters.push_back(cr);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed report document: ") + e.what());
    }
    return r;
}

void write_report_file(const std::string& path, const ComparisonReport& report)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << report_to_json(report).dump(2) << '\n';
}

ComparisonReport read_report_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return report_from_json(doc);
}

} // namespace sparta::app
