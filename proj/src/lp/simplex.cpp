#include "sparta/lp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "sparta/common/error.hpp"

namespace sparta::lp {

const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::Infeasible:
        return "infeasible";
    case SolveStatus::Unbounded:
        return "unbounded";
    }
    return "unknown";
}

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class State : unsigned char { Basic, AtLower, AtUpper, AtZero, Fixed };

// Product-form update: the basis column at `pos` was replaced; `alpha` is the
// entering column expressed in the previous basis.
struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
};

struct RatioResult {
    int leave = -1;
    double theta = 0.0;
    bool flip = false;
    bool unbounded = false;
};

double power_of_two(double v)
{
    if (!(v > 0.0) || !std::isfinite(v))
        return 1.0;
    return std::exp2(std::round(std::log2(v)));
}

class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const SolverOptions& options) : lp_(lp), opt_(options)
    {
        m_ = static_cast<int>(lp.num_constraints());
        n_ = static_cast<int>(lp.num_variables());
        build_columns();
        if (opt_.scaling)
            compute_scaling();
        else {
            row_scale_.assign(m_, 1.0);
            col_scale_.assign(n_, 1.0);
        }
        apply_scaling();
    }

    SolveResult run()
    {
        SolveResult result;
        setup_initial_basis();
        max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations : 200L * (m_ + n_) + 10000L;

        if (!art_row_.empty()) {
            set_phase_costs(1);
            if (!optimize())
                throw NumericError("simplex phase one reported an unbounded direction");
            if (max_artificial() > kFeasTol * 10.0) {
                result.status = SolveStatus::Infeasible;
                finish(result);
                return result;
            }
            retire_artificials();
        }
        set_phase_costs(2);
        if (!optimize()) {
            result.status = SolveStatus::Unbounded;
            finish(result);
            return result;
        }
        result.status = SolveStatus::Optimal;
        finish(result);
        return result;
    }

private:
    static constexpr double kFeasTol = 1e-9;
    static constexpr double kDualTol = 1e-9;
    static constexpr double kPivotTol = 1e-9;
    static constexpr double kDropTol = 1e-14;
    static constexpr int kDegenerateLimit = 60;

    // ---- problem data -------------------------------------------------------

    void build_columns()
    {
        std::vector<int> count(n_ + 1, 0);
        for (const Constraint& r : lp_.constraints())
            for (const Term& t : r.terms)
                ++count[t.var + 1];
        cstart_.assign(n_ + 1, 0);
        for (int j = 0; j < n_; ++j)
            cstart_[j + 1] = cstart_[j] + count[j + 1];
        crow_.resize(cstart_[n_]);
        cval_.resize(cstart_[n_]);
        std::vector<int> fill(cstart_.begin(), cstart_.end() - 1);
        for (int i = 0; i < m_; ++i)
            for (const Term& t : lp_.constraint(i).terms) {
                crow_[fill[t.var]] = i;
                cval_[fill[t.var]++] = t.coef;
            }
    }

    // Geometric-mean scaling rounded to powers of two, a few passes.
    void compute_scaling()
    {
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(n_, 1.0);
        std::vector<double> rmin(m_), rmax(m_);
        for (int pass = 0; pass < 6; ++pass) {
            std::fill(rmin.begin(), rmin.end(), kInf);
            std::fill(rmax.begin(), rmax.end(), 0.0);
            for (int j = 0; j < n_; ++j)
                for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
                    const double a = std::abs(cval_[k]) * col_scale_[j];
                    rmin[crow_[k]] = std::min(rmin[crow_[k]], a);
                    rmax[crow_[k]] = std::max(rmax[crow_[k]], a);
                }
            for (int i = 0; i < m_; ++i)
                if (rmax[i] > 0.0)
                    row_scale_[i] = 1.0 / std::sqrt(rmin[i] * rmax[i]);
            for (int j = 0; j < n_; ++j) {
                double lo = kInf, hi = 0.0;
                for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) {
                    const double a = std::abs(cval_[k]) * row_scale_[crow_[k]];
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
                if (hi > 0.0)
                    col_scale_[j] = 1.0 / std::sqrt(lo * hi);
            }
        }
        for (double& r : row_scale_)
            r = power_of_two(r);
        for (double& s : col_scale_)
            s = power_of_two(s);
    }

    void apply_scaling()
    {
        for (int j = 0; j < n_; ++j)
            for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
                cval_[k] *= row_scale_[crow_[k]] * col_scale_[j];

        double cmax = 0.0;
        for (int j = 0; j < n_; ++j)
            cmax = std::max(cmax, std::abs(lp_.cost(j) * col_scale_[j]));
        cost_scale_ = cmax > 0.0 ? power_of_two(1.0 / cmax) : 1.0;

        const int cols = n_ + m_;
        lo_.assign(cols, 0.0);
        up_.assign(cols, 0.0);
        true_cost_.assign(cols, 0.0);
        for (int j = 0; j < n_; ++j) {
            const Variable& v = lp_.variable(j);
            lo_[j] = v.lower / col_scale_[j];
            up_[j] = v.upper / col_scale_[j];
            true_cost_[j] = lp_.cost(j) * col_scale_[j] * cost_scale_;
        }
        for (int i = 0; i < m_; ++i) {
            const Constraint& r = lp_.constraint(i);
            const double rhs = r.rhs * row_scale_[i];
            const int col = n_ + i;
            lo_[col] = r.relation == Relation::LessEqual ? -kInf : rhs;
            up_[col] = r.relation == Relation::GreaterEqual ? kInf : rhs;
        }
    }

    int num_columns() const { return n_ + m_ + static_cast<int>(art_row_.size()); }

    template <typename F>
    void for_each_entry(int j, F&& f) const
    {
        if (j < n_) {
            for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
                f(crow_[k], cval_[k]);
        } else if (j < n_ + m_) {
            f(j - n_, -1.0);
        } else {
            const int a = j - n_ - m_;
            f(art_row_[a], art_sign_[a]);
        }
    }

    double dot_column(int j, const Vec& y) const
    {
        if (j < n_) {
            double s = 0.0;
            for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
                s += cval_[k] * y[crow_[k]];
            return s;
        }
        if (j < n_ + m_)
            return -y[j - n_];
        const int a = j - n_ - m_;
        return art_sign_[a] * y[art_row_[a]];
    }

    // ---- basis setup ----------------------------------------------------------

    void setup_initial_basis()
    {
        const int cols = n_ + m_;
        state_.assign(cols, State::AtLower);
        x_.assign(cols, 0.0);
        for (int j = 0; j < n_; ++j)
            place_nonbasic_default(j);

        std::vector<double> activity(m_, 0.0);
        for (int j = 0; j < n_; ++j)
            if (x_[j] != 0.0)
                for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
                    activity[crow_[k]] += cval_[k] * x_[j];

        head_.assign(m_, -1);
        pos_.assign(cols, -1);
        for (int i = 0; i < m_; ++i) {
            const int col = n_ + i;
            const double r = activity[i];
            if (r >= lo_[col] - kFeasTol && r <= up_[col] + kFeasTol) {
                make_basic(col, i, r);
                continue;
            }
            // Logical sits at the violated bound; an artificial absorbs the gap.
            const bool below = r < lo_[col];
            x_[col] = below ? lo_[col] : up_[col];
            state_[col] = lo_[col] == up_[col] ? State::Fixed : (below ? State::AtLower : State::AtUpper);
            const double gap = x_[col] - r;
            const int art = num_columns();
            art_row_.push_back(i);
            art_sign_.push_back(gap > 0.0 ? 1.0 : -1.0);
            lo_.push_back(0.0);
            up_.push_back(kInf);
            true_cost_.push_back(0.0);
            state_.push_back(State::Basic);
            x_.push_back(std::abs(gap));
            pos_.push_back(-1);
            make_basic(art, i, std::abs(gap));
        }
        refactor();
    }

    void place_nonbasic_default(int j)
    {
        if (lo_[j] == up_[j]) {
            state_[j] = State::Fixed;
            x_[j] = lo_[j];
        } else if (std::isfinite(lo_[j])) {
            state_[j] = State::AtLower;
            x_[j] = lo_[j];
        } else if (std::isfinite(up_[j])) {
            state_[j] = State::AtUpper;
            x_[j] = up_[j];
        } else {
            state_[j] = State::AtZero;
            x_[j] = 0.0;
        }
    }

    void make_basic(int col, int position, double value)
    {
        head_[position] = col;
        pos_[col] = position;
        state_[col] = State::Basic;
        x_[col] = value;
    }

    void set_phase_costs(int phase)
    {
        phase_ = phase;
        cost_.assign(num_columns(), 0.0);
        if (phase == 1) {
            for (int a = 0; a < static_cast<int>(art_row_.size()); ++a)
                cost_[n_ + m_ + a] = 1.0;
        } else {
            for (int j = 0; j < n_; ++j)
                cost_[j] = true_cost_[j];
        }
    }

    // ---- factorization --------------------------------------------------------

    void refactor()
    {
        etas_.clear();
        if (m_ == 0)
            return;
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(m_) * 2);
        for (int p = 0; p < m_; ++p)
            for_each_entry(head_[p], [&](int row, double v) { triplets.emplace_back(row, p, v); });
        SpMat basis(m_, m_);
        basis.setFromTriplets(triplets.begin(), triplets.end());
        basis.makeCompressed();
        lu_.analyzePattern(basis);
        lu_.factorize(basis);
        if (lu_.info() != Eigen::Success)
            throw NumericError("simplex basis became singular during refactorization");
        ++factorizations_;
    }

    void ftran(Vec& v) const
    {
        if (m_ == 0)
            return;
        v = lu_.solve(v);
        for (const Eta& e : etas_) {
            const double zp = v[e.pos] / e.pivot;
            if (zp != 0.0)
                for (std::size_t k = 0; k < e.index.size(); ++k)
                    v[e.index[k]] -= e.value[k] * zp;
            v[e.pos] = zp;
        }
    }

    void btran(Vec& v) const
    {
        if (m_ == 0)
            return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = v[it->pos];
            for (std::size_t k = 0; k < it->index.size(); ++k)
                s -= it->value[k] * v[it->index[k]];
            v[it->pos] = s / it->pivot;
        }
        v = lu_.transpose().solve(v);
    }

    void compute_basic_values()
    {
        if (m_ == 0)
            return;
        Vec rhs = Vec::Zero(m_);
        const int cols = num_columns();
        for (int j = 0; j < cols; ++j) {
            if (state_[j] == State::Basic || x_[j] == 0.0)
                continue;
            const double xj = x_[j];
            for_each_entry(j, [&](int row, double v) { rhs[row] -= v * xj; });
        }
        ftran(rhs);
        for (int p = 0; p < m_; ++p)
            x_[head_[p]] = rhs[p];
    }

    // ---- iterations -----------------------------------------------------------

    bool eligible(int j, double d) const
    {
        switch (state_[j]) {
        case State::AtLower:
            return d < -kDualTol;
        case State::AtUpper:
            return d > kDualTol;
        case State::AtZero:
            return std::abs(d) > kDualTol;
        default:
            return false;
        }
    }

    int price(const Vec& y, bool bland, double& dq) const
    {
        const int cols = num_columns();
        int best = -1;
        double best_score = 0.0;
        for (int j = 0; j < cols; ++j) {
            if (state_[j] == State::Basic || state_[j] == State::Fixed)
                continue;
            const double d = cost_[j] - dot_column(j, y);
            if (!eligible(j, d))
                continue;
            if (bland) {
                dq = d;
                return j;
            }
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
                dq = d;
            }
        }
        return best;
    }

    RatioResult ratio_test(int q, double dir, const Vec& alpha, bool bland) const
    {
        RatioResult out;
        const double range = up_[q] - lo_[q];
        if (bland) {
            double best = kInf;
            for (int i = 0; i < m_; ++i) {
                const double a = alpha[i];
                if (std::abs(a) < kPivotTol)
                    continue;
                const int col = head_[i];
                const double rate = -dir * a;
                double ratio;
                if (rate < 0.0) {
                    if (!std::isfinite(lo_[col]))
                        continue;
                    ratio = std::max(0.0, (x_[col] - lo_[col]) / -rate);
                } else {
                    if (!std::isfinite(up_[col]))
                        continue;
                    ratio = std::max(0.0, (up_[col] - x_[col]) / rate);
                }
                if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && out.leave >= 0 && col < head_[out.leave])) {
                    best = std::min(best, ratio);
                    out.leave = i;
                }
            }
            if (range <= best) {
                out.leave = -1;
                out.flip = true;
                out.theta = range;
            } else {
                out.theta = best;
            }
            out.unbounded = !out.flip && out.leave < 0;
            return out;
        }

        // Harris two-pass: relaxed bound first, then the largest pivot among
        // rows whose exact ratio fits under the relaxed step.
        double theta_max = kInf;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha[i];
            if (std::abs(a) < kPivotTol)
                continue;
            const int col = head_[i];
            const double rate = -dir * a;
            if (rate < 0.0) {
                if (std::isfinite(lo_[col]))
                    theta_max = std::min(theta_max, (x_[col] - lo_[col] + kFeasTol) / -rate);
            } else if (std::isfinite(up_[col])) {
                theta_max = std::min(theta_max, (up_[col] + kFeasTol - x_[col]) / rate);
            }
        }
        if (range <= theta_max) {
            out.flip = std::isfinite(range);
            out.theta = range;
            out.unbounded = !out.flip;
            return out;
        }
        double best_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha[i];
            if (std::abs(a) < kPivotTol)
                continue;
            const int col = head_[i];
            const double rate = -dir * a;
            double ratio;
            if (rate < 0.0) {
                if (!std::isfinite(lo_[col]))
                    continue;
                ratio = (x_[col] - lo_[col]) / -rate;
            } else {
                if (!std::isfinite(up_[col]))
                    continue;
                ratio = (up_[col] - x_[col]) / rate;
            }
            if (ratio <= theta_max && std::abs(a) > best_pivot) {
                best_pivot = std::abs(a);
                out.leave = i;
                out.theta = std::max(ratio, 0.0);
            }
        }
        out.unbounded = out.leave < 0;
        return out;
    }

    void pivot(int q, int r, const Vec& alpha)
    {
        Eta eta;
        eta.pos = r;
        eta.pivot = alpha[r];
        for (int i = 0; i < m_; ++i)
            if (i != r && std::abs(alpha[i]) > kDropTol) {
                eta.index.push_back(i);
                eta.value.push_back(alpha[i]);
            }
        etas_.push_back(std::move(eta));
        const int leaving = head_[r];
        pos_[leaving] = -1;
        head_[r] = q;
        pos_[q] = r;
        state_[q] = State::Basic;
    }

    void leave_at_bound(int col, bool at_lower)
    {
        if (lo_[col] == up_[col]) {
            state_[col] = State::Fixed;
            x_[col] = lo_[col];
        } else if (at_lower) {
            state_[col] = State::AtLower;
            x_[col] = lo_[col];
        } else {
            state_[col] = State::AtUpper;
            x_[col] = up_[col];
        }
    }

    // Runs the current phase to optimality. Returns false on an unbounded ray.
    bool optimize()
    {
        Vec y(m_), alpha(m_);
        int degenerate = 0;
        int confirmations = 0;
        bool fresh = false;
        while (true) {
            if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
                refactor();
                compute_basic_values();
                fresh = true;
            }
            for (int p = 0; p < m_; ++p)
                y[p] = cost_[head_[p]];
            btran(y);
            const bool bland = degenerate > kDegenerateLimit;
            double dq = 0.0;
            const int q = price(y, bland, dq);
            if (q < 0) {
                // Confirm optimality on a fresh factorization before stopping.
                if (fresh || confirmations > 3)
                    return true;
                ++confirmations;
                refactor();
                compute_basic_values();
                fresh = true;
                continue;
            }
            fresh = false;
            if (++iterations_ > max_iterations_)
                throw NumericError("simplex iteration limit reached");

            alpha.setZero();
            for_each_entry(q, [&](int row, double v) { alpha[row] = v; });
            ftran(alpha);
            const double dir = dq < 0.0 ? 1.0 : -1.0;
            const RatioResult rt = ratio_test(q, dir, alpha, bland);
            if (rt.unbounded) {
                if (phase_ == 1)
                    throw NumericError("simplex phase one found an unbounded ray");
                return false;
            }
            const double step = dir * rt.theta;
            x_[q] += step;
            if (step != 0.0)
                for (int i = 0; i < m_; ++i)
                    if (alpha[i] != 0.0)
                        x_[head_[i]] -= step * alpha[i];
            degenerate = rt.theta * std::abs(dq) > 1e-12 ? 0 : degenerate + 1;

            if (rt.flip) {
                state_[q] = dir > 0.0 ? State::AtUpper : State::AtLower;
                x_[q] = dir > 0.0 ? up_[q] : lo_[q];
                continue;
            }
            const int leaving = head_[rt.leave];
            const bool to_lower = -dir * alpha[rt.leave] < 0.0;
            pivot(q, rt.leave, alpha);
            leave_at_bound(leaving, to_lower);
        }
    }

    double max_artificial() const
    {
        double worst = 0.0;
        for (int a = 0; a < static_cast<int>(art_row_.size()); ++a)
            worst = std::max(worst, x_[n_ + m_ + a]);
        return worst;
    }

    // Pivots basic artificials out where possible and fixes all artificials at zero.
    void retire_artificials()
    {
        const int first_art = n_ + m_;
        const int cols = num_columns();
        Vec rho(m_), alpha(m_);
        for (int p = 0; p < m_; ++p) {
            if (head_[p] < first_art)
                continue;
            rho.setZero();
            rho[p] = 1.0;
            btran(rho);
            int best = -1;
            double best_abs = 1e-7;
            for (int j = 0; j < first_art; ++j) {
                if (state_[j] == State::Basic)
                    continue;
                const double a = std::abs(dot_column(j, rho));
                const double bonus = state_[j] == State::Fixed ? 0.5 : 1.0;
                if (a * bonus > best_abs) {
                    best_abs = a * bonus;
                    best = j;
                }
            }
            if (best < 0)
                continue;  // redundant row, the artificial stays basic at zero
            alpha.setZero();
            for_each_entry(best, [&](int row, double v) { alpha[row] = v; });
            ftran(alpha);
            const int leaving = head_[p];
            pivot(best, p, alpha);
            state_[leaving] = State::Fixed;
            x_[leaving] = 0.0;
            if (static_cast<int>(etas_.size()) >= opt_.refactor_interval)
                refactor();
        }
        for (int j = first_art; j < cols; ++j) {
            up_[j] = 0.0;
            if (state_[j] != State::Basic) {
                state_[j] = State::Fixed;
                x_[j] = 0.0;
            }
        }
        refactor();
        compute_basic_values();
    }

    void finish(SolveResult& result)
    {
        result.iteration_count = iterations_;
        result.primal_values.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            double v = x_[j] * col_scale_[j];
            const Variable& var = lp_.variable(j);
            v = std::min(std::max(v, var.lower), var.upper);
            result.primal_values[j] = v;
        }
        if (result.status == SolveStatus::Optimal) {
            result.objective_value = lp_.objective_value(result.primal_values);
            check_residuals(result.primal_values);
        }
    }

    void check_residuals(const std::vector<double>& x) const
    {
        const double tol = opt_.tolerance;
        for (int i = 0; i < m_; ++i) {
            const Constraint& r = lp_.constraint(i);
            const double a = lp_.row_activity(i, x);
            double scale = 1.0 + std::abs(r.rhs);
            for (const Term& t : r.terms)
                scale = std::max(scale, std::abs(t.coef * x[t.var]));
            double violation = 0.0;
            if (r.relation != Relation::LessEqual)
                violation = std::max(violation, r.rhs - a);
            if (r.relation != Relation::GreaterEqual)
                violation = std::max(violation, a - r.rhs);
            if (violation > tol * scale)
                throw NumericError("simplex solution violates row '" + r.name + "' by " + std::to_string(violation));
        }
    }

    const LinearProgram& lp_;
    SolverOptions opt_;
    int m_ = 0;
    int n_ = 0;
    std::vector<int> cstart_;
    std::vector<int> crow_;
    std::vector<double> cval_;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
    double cost_scale_ = 1.0;
    std::vector<double> lo_;
    std::vector<double> up_;
    std::vector<double> true_cost_;
    std::vector<double> cost_;
    std::vector<int> art_row_;
    std::vector<double> art_sign_;

    std::vector<int> head_;
    std::vector<int> pos_;
    std::vector<State> state_;
    std::vector<double> x_;
    std::vector<Eta> etas_;
    mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
    int phase_ = 1;
    long iterations_ = 0;
    long max_iterations_ = 0;
    long factorizations_ = 0;
};

} // namespace

SolveResult solve(const LinearProgram& lp, const SolverOptions& options)
{
    if (lp.num_variables() > options.max_variables)
        throw SizeLimitError("LP has " + std::to_string(lp.num_variables()) + " variables, limit is " +
                             std::to_string(options.max_variables));
    lp.check();
    const auto start = std::chrono::steady_clock::now();
    for (const Variable& v : lp.variables())
        if (v.lower > v.upper) {
            SolveResult infeasible;
            infeasible.status = SolveStatus::Infeasible;
            infeasible.primal_values.assign(lp.num_variables(), 0.0);
            return infeasible;
        }
    RevisedSimplex simplex(lp, options);
    SolveResult result = simplex.run();
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

SolveResult solve(const LinearProgram& lp, double tolerance)
{
    SolverOptions options;
    options.tolerance = tolerance;
    return solve(lp, options);
}

} // namespace sparta::lp
