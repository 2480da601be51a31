#include "lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sparta::testkit {

namespace {

// One linear constraint a.x (>= or =) b in the original variable space.
struct Halfspace {
    std::vector<long double> a;
    long double b = 0.0;
    bool equality = false;
};

std::vector<Halfspace> collect(const lp::LinearProgram& lp)
{
    const std::size_t n = lp.num_variables();
    std::vector<Halfspace> out;
    for (const lp::Constraint& r : lp.constraints()) {
        Halfspace h;
        h.a.assign(n, 0.0L);
        for (const lp::Term& t : r.terms)
            h.a[t.var] += t.coef;
        h.b = r.rhs;
        if (r.relation == lp::Relation::LessEqual) {
            for (auto& v : h.a)
                v = -v;
            h.b = -h.b;
        }
        h.equality = r.relation == lp::Relation::Equal;
        out.push_back(h);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const lp::Variable& v = lp.variable(static_cast<int>(j));
        if (std::isfinite(v.lower) && v.lower == v.upper) {
            Halfspace h;
            h.a.assign(n, 0.0L);
            h.a[j] = 1.0L;
            h.b = v.lower;
            h.equality = true;
            out.push_back(h);
            continue;
        }
        if (std::isfinite(v.lower)) {
            Halfspace h;
            h.a.assign(n, 0.0L);
            h.a[j] = 1.0L;
            h.b = v.lower;
            out.push_back(h);
        }
        if (std::isfinite(v.upper)) {
            Halfspace h;
            h.a.assign(n, 0.0L);
            h.a[j] = -1.0L;
            h.b = -v.upper;
            out.push_back(h);
        }
    }
    return out;
}

// Solves the square system rows * x = rhs by Gaussian elimination. Returns
// false if the rows are (numerically) dependent.
bool solve_square(std::vector<std::vector<long double>> m, std::vector<long double> rhs, std::vector<long double>& x)
{
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col]))
                piv = r;
        if (std::fabs(m[piv][col]) < 1e-10L)
            return false;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = m[r][col] / m[col][col];
            if (f == 0.0L)
                continue;
            for (std::size_t k = col; k < n; ++k)
                m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    x.assign(n, 0.0L);
    for (std::size_t i = n; i-- > 0;) {
        long double s = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= m[i][k] * x[k];
        x[i] = s / m[i][i];
    }
    return true;
}

// Calls f on every k-subset of {0..n-1}; stops early when f returns false.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        if (!f(idx))
            return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

double binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

constexpr long double kTol = 1e-9L;

} // namespace

double enumeration_size(const lp::LinearProgram& lp)
{
    const auto hs = collect(lp);
    std::size_t eq = 0;
    for (const auto& h : hs)
        eq += h.equality ? 1 : 0;
    const std::size_t n = lp.num_variables();
    const std::size_t ineq = hs.size() - eq;
    if (eq > n)
        return 1.0;
    return binomial(ineq, n - eq) + (eq < n ? binomial(ineq, n - eq - 1) : 0.0);
}

OracleResult brute_force_solve(const lp::LinearProgram& lp)
{
    const std::size_t n = lp.num_variables();
    const auto hs = collect(lp);
    std::vector<const Halfspace*> eqs, ineqs;
    for (const auto& h : hs)
        (h.equality ? eqs : ineqs).push_back(&h);

    OracleResult out;
    out.status = lp::SolveStatus::Infeasible;
    long double best = INFINITY;

    auto feasible = [&](const std::vector<long double>& x) {
        for (const auto& h : hs) {
            long double s = 0.0L;
            long double scale = 1.0L + std::fabs(h.b);
            for (std::size_t j = 0; j < n; ++j)
                s += h.a[j] * x[j];
            if (h.equality ? std::fabs(s - h.b) > kTol * scale : s < h.b - kTol * scale)
                return false;
        }
        return true;
    };

    if (eqs.size() <= n) {
        const std::size_t k = n - eqs.size();
        for_each_subset(ineqs.size(), k, [&](const std::vector<std::size_t>& pick) {
            std::vector<std::vector<long double>> m;
            std::vector<long double> rhs;
            for (const auto* e : eqs) {
                m.push_back(e->a);
                rhs.push_back(e->b);
            }
            for (std::size_t i : pick) {
                m.push_back(ineqs[i]->a);
                rhs.push_back(ineqs[i]->b);
            }
            std::vector<long double> x;
            if (!solve_square(m, rhs, x) || !feasible(x))
                return true;
            long double obj = lp.objective_offset();
            for (std::size_t j = 0; j < n; ++j)
                obj += static_cast<long double>(lp.cost(static_cast<int>(j))) * x[j];
            if (obj < best) {
                best = obj;
                out.x.assign(x.begin(), x.end());
            }
            return true;
        });
    }
    if (!std::isfinite(static_cast<double>(best)))
        return out;

    // Extreme rays of the recession cone: n-1 tight homogeneous constraints.
    bool unbounded = false;
    if (eqs.size() < n) {
        const std::size_t k = n - 1 - eqs.size();
        for_each_subset(ineqs.size(), k, [&](const std::vector<std::size_t>& pick) {
            std::vector<std::vector<long double>> rows;
            for (const auto* e : eqs)
                rows.push_back(e->a);
            for (std::size_t i : pick)
                rows.push_back(ineqs[i]->a);
            // Null direction: fix one coordinate to 1 and solve for the rest.
            for (std::size_t free = 0; free < n && !unbounded; ++free) {
                std::vector<std::vector<long double>> m;
                std::vector<long double> rhs;
                for (const auto& r : rows) {
                    std::vector<long double> reduced;
                    for (std::size_t j = 0; j < n; ++j)
                        if (j != free)
                            reduced.push_back(r[j]);
                    m.push_back(reduced);
                    rhs.push_back(-r[free]);
                }
                std::vector<long double> y;
                if (!solve_square(m, rhs, y))
                    continue;
                std::vector<long double> dir(n);
                for (std::size_t j = 0, t = 0; j < n; ++j)
                    dir[j] = j == free ? 1.0L : y[t++];
                for (long double sign : {1.0L, -1.0L}) {
                    bool ok = true;
                    long double norm = 0.0L;
                    for (auto v : dir)
                        norm = std::max(norm, std::fabs(v));
                    for (const auto* h : ineqs) {
                        long double s = 0.0L;
                        for (std::size_t j = 0; j < n; ++j)
                            s += h->a[j] * dir[j] * sign;
                        if (s < -kTol * norm) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok)
                        continue;
                    long double slope = 0.0L;
                    for (std::size_t j = 0; j < n; ++j)
                        slope += static_cast<long double>(lp.cost(static_cast<int>(j))) * dir[j] * sign;
                    if (slope < -kTol * norm)
                        unbounded = true;
                }
                break;
            }
            return !unbounded;
        });
    }
    if (unbounded) {
        out.status = lp::SolveStatus::Unbounded;
        return out;
    }
    out.status = lp::SolveStatus::Optimal;
    out.objective = static_cast<double>(best);
    return out;
}

lp::LinearProgram random_lp(std::uint64_t seed, int max_vars, int max_rows)
{
    std::mt19937_64 rng(seed);
    auto uniform_int = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    lp::LinearProgram lp;
    const int n = uniform_int(1, max_vars);
    const int m = uniform_int(1, max_rows);
    for (int j = 0; j < n; ++j) {
        const int kind = uniform_int(0, 9);
        double lo = 0.0, up = lp::kInf;
        if (kind == 7) {
            lo = uniform_int(-3, 0);
            up = lo + uniform_int(1, 6);
        } else if (kind == 8) {
            lo = -lp::kInf;
            up = uniform_int(0, 5);
        } else if (kind == 9) {
            lo = uniform_int(-4, 2);
        }
        lp.add_variable("x" + std::to_string(j), lo, up, uniform_int(-4, 6));
    }
    for (int i = 0; i < m; ++i) {
        std::vector<lp::Term> terms;
        for (int j = 0; j < n; ++j)
            if (uniform_int(0, 2) != 0) {
                const int a = uniform_int(-5, 5);
                if (a != 0)
                    terms.push_back({j, static_cast<double>(a)});
            }
        const int r = uniform_int(0, 5);
        const lp::Relation rel = r < 2 ? lp::Relation::LessEqual
                                       : (r < 5 ? lp::Relation::GreaterEqual : lp::Relation::Equal);
        lp.add_constraint("c" + std::to_string(i), terms, rel, uniform_int(-6, 12));
    }
    return lp;
}

} // namespace sparta::testkit
