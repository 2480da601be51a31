#include "sparta/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include "sparta/common/error.hpp"

namespace sparta::lp {

int LinearProgram::add_variable(const std::string& name, double lower, double upper, double cost)
{
    const int index = static_cast<int>(vars_.size());
    if (!var_index_.emplace(name, index).second)
        throw NameCollisionError("duplicate variable key '" + name + "'");
    vars_.push_back({name, lower, upper});
    cost_.push_back(cost);
    return index;
}

int LinearProgram::add_constraint(const std::string& name, std::vector<Term> terms, Relation relation, double rhs)
{
    const int index = static_cast<int>(rows_.size());
    if (!row_index_.emplace(name, index).second)
        throw NameCollisionError("duplicate constraint key '" + name + "'");
    // Merge repeated variables and drop explicit zeros.
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coef == 0.0; }),
                 merged.end());
    rows_.push_back({name, std::move(merged), relation, rhs});
    return index;
}

void LinearProgram::set_bounds(int var, double lower, double upper)
{
    vars_[var].lower = lower;
    vars_[var].upper = upper;
}

std::size_t LinearProgram::num_nonzeros() const
{
    std::size_t nnz = 0;
    for (const Constraint& r : rows_)
        nnz += r.terms.size();
    return nnz;
}

int LinearProgram::find_variable(const std::string& name) const
{
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

int LinearProgram::find_constraint(const std::string& name) const
{
    auto it = row_index_.find(name);
    return it == row_index_.end() ? -1 : it->second;
}

double LinearProgram::objective_value(const std::vector<double>& x) const
{
    double sum = offset_;
    for (std::size_t j = 0; j < vars_.size(); ++j)
        sum += cost_[j] * x[j];
    return sum;
}

double LinearProgram::row_activity(int i, const std::vector<double>& x) const
{
    double sum = 0.0;
    for (const Term& t : rows_[i].terms)
        sum += t.coef * x[t.var];
    return sum;
}

double LinearProgram::max_violation(const std::vector<double>& x) const
{
    double worst = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        worst = std::max(worst, vars_[j].lower - x[j]);
        worst = std::max(worst, x[j] - vars_[j].upper);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double a = row_activity(static_cast<int>(i), x);
        const Constraint& r = rows_[i];
        if (r.relation != Relation::LessEqual)
            worst = std::max(worst, r.rhs - a);
        if (r.relation != Relation::GreaterEqual)
            worst = std::max(worst, a - r.rhs);
    }
    return worst;
}

void LinearProgram::check() const
{
    const int n = static_cast<int>(vars_.size());
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        if (!std::isfinite(cost_[j]))
            throw NumericError("non-finite objective coefficient for '" + vars_[j].name + "'");
        if (std::isnan(vars_[j].lower) || std::isnan(vars_[j].upper) || vars_[j].lower == kInf ||
            vars_[j].upper == -kInf)
            throw NumericError("invalid bounds for '" + vars_[j].name + "'");
    }
    for (const Constraint& r : rows_) {
        if (!std::isfinite(r.rhs))
            throw NumericError("non-finite right-hand side in '" + r.name + "'");
        for (const Term& t : r.terms) {
            if (t.var < 0 || t.var >= n)
                throw NumericError("row '" + r.name + "' references an unknown variable");
            if (!std::isfinite(t.coef))
                throw NumericError("non-finite coefficient in '" + r.name + "'");
        }
    }
}

} // namespace sparta::lp
