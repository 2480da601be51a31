#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace sparta::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
    int var;
    double coef;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Relation relation = Relation::GreaterEqual;
    double rhs = 0.0;
};

// Minimization LP over bounded variables. Variable and constraint names are
// semantic registry keys and must be unique.
class LinearProgram {
public:
    int add_variable(const std::string& name, double lower = 0.0, double upper = kInf, double cost = 0.0);
    int add_constraint(const std::string& name, std::vector<Term> terms, Relation relation, double rhs);

    // Appends a term to an existing row; the variable must not already appear in it.
    void append_term(int row, Term term) { rows_[row].terms.push_back(term); }
    void set_rhs(int row, double rhs) { rows_[row].rhs = rhs; }

    void set_cost(int var, double cost) { cost_[var] = cost; }
    void add_cost(int var, double cost) { cost_[var] += cost; }
    void set_bounds(int var, double lower, double upper);
    void set_objective_offset(double offset) { offset_ = offset; }
    void add_objective_offset(double offset) { offset_ += offset; }

    std::size_t num_variables() const { return vars_.size(); }
    std::size_t num_constraints() const { return rows_.size(); }
    std::size_t num_nonzeros() const;

    const Variable& variable(int j) const { return vars_[j]; }
    const Constraint& constraint(int i) const { return rows_[i]; }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return rows_; }
    const std::vector<double>& costs() const { return cost_; }
    double cost(int j) const { return cost_[j]; }
    double objective_offset() const { return offset_; }

    // Registry lookups; -1 when the key is unknown.
    int find_variable(const std::string& name) const;
    int find_constraint(const std::string& name) const;

    double objective_value(const std::vector<double>& x) const;
    double row_activity(int i, const std::vector<double>& x) const;
    // Largest bound or row violation of a point, absolute units.
    double max_violation(const std::vector<double>& x) const;

    // Throws NumericError on non-finite coefficients or dangling indices.
    void check() const;

private:
    std::vector<Variable> vars_;
    std::vector<double> cost_;
    std::vector<Constraint> rows_;
    std::unordered_map<std::string, int> var_index_;
    std::unordered_map<std::string, int> row_index_;
    double offset_ = 0.0;
};

} // namespace sparta::lp
