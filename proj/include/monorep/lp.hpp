#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"

// Dense two-phase simplex with Bland's anti-cycling rule.  Problem sizes are
// at most a few hundred variables, so everything stays in one tableau.

namespace monorep {

struct Bound {
    std::optional<double> lo;  // nullopt = -inf
    std::optional<double> hi;  // nullopt = +inf

    static Bound free() { return {}; }
    static Bound nonneg() { return {0.0, std::nullopt}; }
    static Bound fixed(double v) { return {v, v}; }
    static Bound range(double l, double h) { return {l, h}; }
};

struct LinearProgram {
    Vec objective;              // minimize
    Mat eq_a;                   // eq_a x = eq_b
    Vec eq_b;
    Mat ineq_a;                 // ineq_a x <= ineq_b
    Vec ineq_b;
    std::vector<Bound> bounds;  // per variable; empty = all nonneg

    std::size_t num_vars() const { return objective.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, NumericFailure };

struct LPSolution {
    LPStatus status = LPStatus::NumericFailure;
    Vec point;
    double value = 0.0;
};

// Standard-form snapshot plus the dual vector, for duality checks in tests.
struct LPCertificate {
    Mat a;
    Vec b;
    Vec c;
    double c0 = 0.0;  // constant offset from variable shifts
    Vec dual;         // one multiplier per standard row
};

namespace detail_lp {

constexpr double kPivotTol = 1e-10;

struct Tableau {
    std::size_t m = 0, n = 0;       // rows, structural+slack columns
    std::size_t limit = 0;          // columns eligible to enter the basis
    std::vector<double> t;          // (m+1) x (n+1), last col rhs, last row objective
    std::vector<std::size_t> basis; // size m

    double& at(std::size_t i, std::size_t j) { return t[i * (n + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (n + 1) + j]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double pv = at(pr, pc);
        for (std::size_t j = 0; j <= n; ++j) at(pr, j) /= pv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n; ++j) at(i, j) -= f * at(pr, j);
        }
        basis[pr] = pc;
    }

    // Bland: entering = lowest-index column with negative reduced cost;
    // leaving = min ratio, ties broken by lowest basis index.
    // Returns 0 optimal, 1 unbounded, 2 iteration cap hit.
    int run(std::size_t max_iters) {
        for (std::size_t it = 0; it < max_iters; ++it) {
            std::size_t enter = n;
            for (std::size_t j = 0; j < limit; ++j) {
                if (at(m, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == n) return 0;
            std::size_t leave = m;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                double aij = at(i, enter);
                if (aij > kPivotTol) {
                    double ratio = at(i, n) / aij;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave == m || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) return 1;
            pivot(leave, enter);
        }
        return 2;
    }
};

}  // namespace detail_lp

inline LPSolution solve_lp(const LinearProgram& lp, LPCertificate* cert = nullptr) {
    using namespace detail_lp;
    const std::size_t nv = lp.num_vars();
    std::vector<Bound> bounds = lp.bounds;
    if (bounds.empty()) bounds.assign(nv, Bound::nonneg());
    if (bounds.size() != nv) throw std::invalid_argument("solve_lp: bounds size");

    // Map original variables to nonnegative standard variables.
    // x_j = shift_j + sgn_j * u_k (+ optionally - u_neg for free vars).
    struct VarMap {
        std::size_t col;                 // primary standard column
        std::size_t neg_col = SIZE_MAX;  // second column for free variables
        double shift = 0.0;
        double sgn = 1.0;
        std::optional<double> extra_hi;  // upper-bound row needed (on u)
    };
    std::vector<VarMap> vmap(nv);
    std::size_t ncols = 0;
    for (std::size_t j = 0; j < nv; ++j) {
        const Bound& b = bounds[j];
        VarMap& v = vmap[j];
        if (b.lo && b.hi && *b.lo == *b.hi) {
            v.col = ncols++;
            v.shift = *b.lo;
            v.extra_hi = 0.0;  // u = 0 forced via bound row
        } else if (b.lo) {
            v.col = ncols++;
            v.shift = *b.lo;
            if (b.hi) v.extra_hi = *b.hi - *b.lo;
        } else if (b.hi) {
            v.col = ncols++;
            v.shift = *b.hi;
            v.sgn = -1.0;
        } else {
            v.col = ncols++;
            v.neg_col = ncols++;
        }
    }

    const std::size_t n_eq = lp.eq_a.rows, n_in = lp.ineq_a.rows;
    std::size_t n_bnd = 0;
    for (const VarMap& v : vmap)
        if (v.extra_hi) ++n_bnd;
    const std::size_t m = n_eq + n_in + n_bnd;
    const std::size_t n_slack = n_in + n_bnd;
    const std::size_t n_struct = ncols;
    const std::size_t n_total = n_struct + n_slack;

    // Assemble standard form A u = b, u >= 0 (slack included), cost c.
    Mat a(m, n_total);
    Vec b(m, 0.0), c(n_total, 0.0);
    double c0 = 0.0;
    auto emit_coeff = [&](std::size_t row, std::size_t j, double coef) {
        const VarMap& v = vmap[j];
        a(row, v.col) += coef * v.sgn;
        if (v.neg_col != SIZE_MAX) a(row, v.neg_col) -= coef;
        b[row] -= coef * v.shift;
    };
    for (std::size_t i = 0; i < n_eq; ++i) {
        b[i] = lp.eq_b[i];
        for (std::size_t j = 0; j < nv; ++j)
            if (lp.eq_a(i, j) != 0.0) emit_coeff(i, j, lp.eq_a(i, j));
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        std::size_t row = n_eq + i;
        b[row] = lp.ineq_b[i];
        for (std::size_t j = 0; j < nv; ++j)
            if (lp.ineq_a(i, j) != 0.0) emit_coeff(row, j, lp.ineq_a(i, j));
        a(row, n_struct + i) = 1.0;
    }
    {
        std::size_t bi = 0;
        for (std::size_t j = 0; j < nv; ++j) {
            if (!vmap[j].extra_hi) continue;
            std::size_t row = n_eq + n_in + bi;
            a(row, vmap[j].col) = 1.0;
            b[row] = *vmap[j].extra_hi;
            a(row, n_struct + n_in + bi) = 1.0;
            ++bi;
        }
    }
    for (std::size_t j = 0; j < nv; ++j) {
        double cj = lp.objective[j];
        if (cj == 0.0) continue;
        c[vmap[j].col] += cj * vmap[j].sgn;
        if (vmap[j].neg_col != SIZE_MAX) c[vmap[j].neg_col] -= cj;
        c0 += cj * vmap[j].shift;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            b[i] = -b[i];
            for (std::size_t j = 0; j < n_total; ++j) a(i, j) = -a(i, j);
        }
    }

    // Phase 1 with artificial variables.
    Tableau tb;
    tb.m = m;
    tb.n = n_total + m;
    tb.limit = tb.n;
    tb.t.assign((m + 1) * (tb.n + 1), 0.0);
    tb.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n_total; ++j) tb.at(i, j) = a(i, j);
        tb.at(i, n_total + i) = 1.0;
        tb.at(i, tb.n) = b[i];
        tb.basis[i] = n_total + i;
    }
    for (std::size_t j = 0; j < m; ++j) tb.at(m, n_total + j) = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) -= tb.at(i, j);

    const std::size_t cap = 50000 + 200 * (m + n_total);
    int rc = tb.run(cap);
    LPSolution sol;
    if (rc == 2) return sol;  // NumericFailure
    double phase1 = -tb.at(m, tb.n);
    if (phase1 > 1e-7) {
        sol.status = LPStatus::Infeasible;
        return sol;
    }
    // Drive remaining artificials out of the basis when possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (tb.basis[i] < n_total) continue;
        std::size_t pc = tb.n;
        for (std::size_t j = 0; j < n_total; ++j) {
            if (std::abs(tb.at(i, j)) > kPivotTol) {
                pc = j;
                break;
            }
        }
        if (pc < tb.n) tb.pivot(i, pc);
        // else: redundant row; artificial stays basic at zero
    }

    // Phase 2: restore real costs; artificial columns may no longer enter.
    tb.limit = n_total;
    for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) = 0.0;
    for (std::size_t j = 0; j < n_total; ++j) tb.at(m, j) = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        double cb = tb.basis[i] < n_total ? c[tb.basis[i]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= tb.n; ++j) tb.at(m, j) -= cb * tb.at(i, j);
    }
    rc = tb.run(cap);
    if (rc == 2) return sol;
    if (rc == 1) {
        sol.status = LPStatus::Unbounded;
        return sol;
    }

    Vec u(n_total, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tb.basis[i] < n_total) u[tb.basis[i]] = tb.at(i, tb.n);
    sol.point.assign(nv, 0.0);
    double val = c0;
    for (std::size_t j = 0; j < nv; ++j) {
        const VarMap& v = vmap[j];
        double uj = u[v.col];
        if (v.neg_col != SIZE_MAX) uj -= u[v.neg_col];
        sol.point[j] = v.shift + v.sgn * uj;
        val += lp.objective[j] * v.sgn * uj;
    }
    sol.value = val;
    sol.status = LPStatus::Optimal;

    if (cert) {
        cert->a = a;
        cert->b = b;
        cert->c = c;
        cert->c0 = c0;
        // Dual from the basis: solve B' y = c_B in the least-squares sense.
        Mat bt(m, m);
        Vec cb(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t col = tb.basis[i];
            if (col < n_total) {
                cb[i] = c[col];
                for (std::size_t r = 0; r < m; ++r) bt(r, i) = a(r, col);
            } else {
                // artificial basic column (redundant row): unit vector, zero cost
                bt(col - n_total, i) = 1.0;
            }
        }
        LstsqResult y = least_squares(bt.transposed(), cb);
        cert->dual = y.x;
    }
    return sol;
}

// Convenience: feasibility of {eq_a x = eq_b, x per bounds} with zero cost.
inline bool lp_feasible(const LinearProgram& lp) {
    LinearProgram p = lp;
    p.objective.assign(lp.num_vars(), 0.0);
    return solve_lp(p).status == LPStatus::Optimal;
}

}  // namespace monorep
