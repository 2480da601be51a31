#include "sparta/lp/exchange_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sparta/common/error.hpp"

namespace sparta::lp {

namespace {

constexpr const char* kObjectiveRow = "COST";
constexpr const char* kAlphabet = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Shortest %g rendering that fits the 12-character numeric field.
std::string number_field(double v)
{
    char buf[64];
    for (int precision = 12; precision >= 1; --precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::string(buf).size() <= 12)
            return buf;
    }
    throw FormatError("value does not fit a 12-character field");
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

// Data line with fixed columns: field 1 at 2, name fields at 5/15/40, numbers at 25/50.
std::string data_line(const std::string& f1, const std::string& f2, const std::string& f3 = "",
                      const std::string& f4 = "", const std::string& f5 = "", const std::string& f6 = "")
{
    std::string line = " " + pad(f1, 2) + " " + pad(f2, 8);
    if (f3.empty() && f4.empty())
        return line;
    line += "  " + pad(f3, 8) + "  " + pad(f4, 12);
    if (!f5.empty())
        line += "   " + pad(f5, 8) + "  " + f6;
    while (!line.empty() && line.back() == ' ')
        line.pop_back();
    return line;
}

class NameTable {
public:
    NameTable(const char* what, int hash_chars) : what_(what), hash_chars_(hash_chars) {}

    std::string add(const std::string& key)
    {
        std::string name = external_name(key, hash_chars_);
        auto [it, inserted] = owner_.emplace(name, key);
        if (!inserted)
            throw NameCollisionError(std::string(what_) + " keys '" + it->second + "' and '" + key +
                                     "' both map to external name '" + name + "'");
        return name;
    }

private:
    const char* what_;
    int hash_chars_;
    std::unordered_map<std::string, std::string> owner_;
};

} // namespace

std::string external_name(const std::string& key, int hash_chars)
{
    if (hash_chars < 1 || hash_chars > 8)
        throw ConfigurationError("hash_chars must lie in [1, 8]");
    std::string prefix;
    for (char c : key) {
        if (static_cast<int>(prefix.size()) == 8 - hash_chars)
            break;
        if (std::isalnum(static_cast<unsigned char>(c)))
            prefix.push_back(c);
    }
    while (static_cast<int>(prefix.size()) < 8 - hash_chars)
        prefix.push_back('_');
    std::uint64_t h = fnv1a(key);
    std::string suffix;
    for (int i = 0; i < hash_chars; ++i) {
        suffix.push_back(kAlphabet[h % 62]);
        h /= 62;
    }
    return prefix + suffix;
}

std::string export_standard(const LinearProgram& lp, const ExportOptions& options)
{
    NameTable row_names("constraint", options.hash_chars);
    NameTable col_names("variable", options.hash_chars);
    std::vector<std::string> rows, cols;
    for (const Constraint& r : lp.constraints())
        rows.push_back(row_names.add(r.name));
    for (const Variable& v : lp.variables())
        cols.push_back(col_names.add(v.name));

    // Column-wise view of the row coefficients.
    std::vector<std::vector<std::pair<int, double>>> by_col(lp.num_variables());
    for (std::size_t i = 0; i < lp.num_constraints(); ++i)
        for (const Term& t : lp.constraint(static_cast<int>(i)).terms)
            by_col[t.var].emplace_back(static_cast<int>(i), t.coef);

    std::ostringstream out;
    out << "NAME          " << options.problem_name << '\n';
    out << "ROWS\n";
    out << data_line("N", kObjectiveRow) << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Relation rel = lp.constraint(static_cast<int>(i)).relation;
        const char* type = rel == Relation::LessEqual ? "L" : (rel == Relation::Equal ? "E" : "G");
        out << data_line(type, rows[i]) << '\n';
    }
    out << "COLUMNS\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::vector<std::pair<std::string, double>> entries;
        if (lp.cost(static_cast<int>(j)) != 0.0)
            entries.emplace_back(kObjectiveRow, lp.cost(static_cast<int>(j)));
        for (const auto& [row, coef] : by_col[j])
            entries.emplace_back(rows[row], coef);
        if (entries.empty())
            entries.emplace_back(kObjectiveRow, 0.0);
        for (std::size_t k = 0; k < entries.size(); k += 2) {
            if (k + 1 < entries.size())
                out << data_line("", cols[j], entries[k].first, number_field(entries[k].second),
                                 entries[k + 1].first, number_field(entries[k + 1].second))
                    << '\n';
            else
                out << data_line("", cols[j], entries[k].first, number_field(entries[k].second)) << '\n';
        }
    }
    out << "RHS\n";
    if (lp.objective_offset() != 0.0)
        out << data_line("", "RHS", kObjectiveRow, number_field(-lp.objective_offset())) << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double rhs = lp.constraint(static_cast<int>(i)).rhs;
        if (rhs != 0.0)
            out << data_line("", "RHS", rows[i], number_field(rhs)) << '\n';
    }
    out << "RANGES\n";
    out << "BOUNDS\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Variable& v = lp.variable(static_cast<int>(j));
        const bool lo_inf = std::isinf(v.lower);
        const bool up_inf = std::isinf(v.upper);
        if (lo_inf && up_inf) {
            out << data_line("FR", "BND", cols[j]) << '\n';
        } else if (!lo_inf && !up_inf && v.lower == v.upper) {
            out << data_line("FX", "BND", cols[j], number_field(v.lower)) << '\n';
        } else {
            if (lo_inf)
                out << data_line("MI", "BND", cols[j]) << '\n';
            else if (v.lower != 0.0 || (!up_inf && v.upper < 0.0))
                out << data_line("LO", "BND", cols[j], number_field(v.lower)) << '\n';
            if (!up_inf)
                out << data_line("UP", "BND", cols[j], number_field(v.upper)) << '\n';
        }
    }
    out << "ENDATA\n";
    return out.str();
}

LinearProgram import_standard(const std::string& text)
{
    enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, End };
    struct RowInfo {
        Relation relation = Relation::GreaterEqual;
        std::vector<Term> terms;
        double rhs = 0.0;
        double range = 0.0;
        bool has_range = false;
    };
    std::string objective;
    std::vector<std::string> row_order;
    std::map<std::string, RowInfo> rows;
    std::vector<std::string> col_order;
    std::unordered_map<std::string, int> col_index;
    std::vector<double> cost, lower, upper;
    double offset = 0.0;

    auto column = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it != col_index.end())
            return it->second;
        const int j = static_cast<int>(col_order.size());
        col_index.emplace(name, j);
        col_order.push_back(name);
        cost.push_back(0.0);
        lower.push_back(0.0);
        upper.push_back(kInf);
        return j;
    };
    auto number = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw FormatError("bad number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw FormatError("bad number '" + s + "'");
        }
    };

    Section section = Section::None;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '*')
            continue;
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (line[0] != ' ' && line[0] != '\t') {
            const std::string& head = tok[0];
            if (head == "NAME")
                section = Section::None;
            else if (head == "ROWS")
                section = Section::Rows;
            else if (head == "COLUMNS")
                section = Section::Columns;
            else if (head == "RHS")
                section = Section::Rhs;
            else if (head == "RANGES")
                section = Section::Ranges;
            else if (head == "BOUNDS")
                section = Section::Bounds;
            else if (head == "ENDATA")
                section = Section::End;
            else
                throw FormatError("unknown section '" + head + "'");
            continue;
        }
        switch (section) {
        case Section::Rows: {
            if (tok.size() != 2)
                throw FormatError("malformed ROWS line: " + line);
            if (tok[0] == "N") {
                if (objective.empty())
                    objective = tok[1];
                continue;
            }
            RowInfo info;
            if (tok[0] == "L")
                info.relation = Relation::LessEqual;
            else if (tok[0] == "E")
                info.relation = Relation::Equal;
            else if (tok[0] == "G")
                info.relation = Relation::GreaterEqual;
            else
                throw FormatError("unknown row type '" + tok[0] + "'");
            if (!rows.emplace(tok[1], info).second)
                throw FormatError("duplicate row '" + tok[1] + "'");
            row_order.push_back(tok[1]);
            break;
        }
        case Section::Columns: {
            if (tok.size() != 3 && tok.size() != 5) {
                if (tok.size() >= 2 && tok[1] == "'MARKER'")
                    continue;
                throw FormatError("malformed COLUMNS line: " + line);
            }
            const int j = column(tok[0]);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double v = number(tok[k + 1]);
                if (tok[k] == objective) {
                    cost[j] += v;
                    continue;
                }
                auto it = rows.find(tok[k]);
                if (it == rows.end())
                    throw FormatError("unknown row '" + tok[k] + "'");
                it->second.terms.push_back({j, v});
            }
            break;
        }
        case Section::Rhs:
        case Section::Ranges: {
            // The set name is optional in free format: an even token count means it is absent.
            const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
            for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
                const double v = number(tok[k + 1]);
                if (tok[k] == objective) {
                    if (section == Section::Rhs)
                        offset = -v;
                    continue;
                }
                auto it = rows.find(tok[k]);
                if (it == rows.end())
                    throw FormatError("unknown row '" + tok[k] + "'");
                if (section == Section::Rhs)
                    it->second.rhs = v;
                else {
                    it->second.range = v;
                    it->second.has_range = true;
                }
            }
            break;
        }
        case Section::Bounds: {
            if (tok.size() < 3)
                throw FormatError("malformed BOUNDS line: " + line);
            const std::string& type = tok[0];
            const bool valueless = type == "FR" || type == "MI" || type == "PL";
            const std::string& name = valueless ? tok.back() : tok[tok.size() - 2];
            const int j = column(name);
            const double v = valueless ? 0.0 : number(tok.back());
            if (type == "UP")
                upper[j] = v;
            else if (type == "LO")
                lower[j] = v;
            else if (type == "FX")
                lower[j] = upper[j] = v;
            else if (type == "FR") {
                lower[j] = -kInf;
                upper[j] = kInf;
            } else if (type == "MI")
                lower[j] = -kInf;
            else if (type == "PL")
                upper[j] = kInf;
            else
                throw FormatError("unsupported bound type '" + type + "'");
            break;
        }
        case Section::End:
            break;
        default:
            throw FormatError("data line outside a section: " + line);
        }
    }
    if (section != Section::End)
        throw FormatError("missing ENDATA");

    LinearProgram lp;
    for (std::size_t j = 0; j < col_order.size(); ++j)
        lp.add_variable(col_order[j], lower[j], upper[j], cost[j]);
    for (const std::string& name : row_order) {
        const RowInfo& r = rows[name];
        if (!r.has_range || r.range == 0.0) {
            lp.add_constraint(name, r.terms, r.relation, r.rhs);
            continue;
        }
        double lo = r.rhs, hi = r.rhs;
        const double width = std::abs(r.range);
        if (r.relation == Relation::GreaterEqual)
            hi = r.rhs + width;
        else if (r.relation == Relation::LessEqual)
            lo = r.rhs - width;
        else if (r.range > 0.0)
            hi = r.rhs + width;
        else
            lo = r.rhs - width;
        lp.add_constraint(name, r.terms, Relation::GreaterEqual, lo);
        lp.add_constraint(name + "~range", r.terms, Relation::LessEqual, hi);
    }
    lp.set_objective_offset(offset);
    return lp;
}

} // namespace sparta::lp
