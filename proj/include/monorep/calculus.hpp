#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "representatives.hpp"

// Sum and chain constructions: product operators and the diagonal map, the
// chain representative (an LP over the fiber L*y* = x*), the second-variable
// infimal convolution, the skew-shift identity, and the convex-graph chain
// identity for affine inner operators.

namespace monorep {

inline OperatorPtr sum_operator(OperatorPtr a, OperatorPtr b) {
    return make_sum(std::move(a), std::move(b));
}

inline OperatorPtr precompose(LinearMapRep l, OperatorPtr m) {
    return make_precomp(std::move(l), std::move(m));
}

inline OperatorPtr product_operator(OperatorPtr a, OperatorPtr b) {
    return make_product(std::move(a), std::move(b));
}

// L : R^n -> R^2n, Lx = (x, x); adjoint L*(x*, y*) = x* + y*.
inline LinearMapRep diagonal_map(std::size_t n) {
    Mat l(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        l(i, i) = 1.0;
        l(n + i, i) = 1.0;
    }
    return LinearMapRep{std::move(l)};
}

// r(x, x*) = min { phi_M(Lx, y*) : L* y* = x* }, phi_M as the finite-graph
// LP; the polyhedral LP attains whenever feasible, so inf becomes min.
inline ExtReal chain_representative_value(const LinearMapRep& l, const FiniteGraph& m,
                                          const Vec& x, const Vec& xstar,
                                          LPStatus* status_out = nullptr) {
    if (m.points.empty()) throw std::invalid_argument("chain_representative_value: empty graph");
    const std::size_t n = l.domain_dim(), my = l.codomain_dim();
    if (x.size() != n || xstar.size() != n || m.points[0].dim() != my)
        throw std::invalid_argument("chain_representative_value: dimension mismatch");
    const std::size_t k = m.points.size();
    Vec lx = l.apply(x);
    // variables: lambda (k, >= 0) then y* (my, free)
    LinearProgram lp;
    lp.objective.assign(k + my, 0.0);
    for (std::size_t j = 0; j < k; ++j) lp.objective[j] = pairing_p(m.points[j]);
    const std::size_t rows = my + my + n + 1;
    lp.eq_a = Mat(rows, k + my);
    lp.eq_b.assign(rows, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < my; ++i) {
            lp.eq_a(i, j) = m.points[j].x[i];          // sum l_j m_j.x = Lx
            lp.eq_a(my + i, j) = m.points[j].xstar[i]; // sum l_j m_j.x* - y* = 0
        }
        lp.eq_a(2 * my + n, j) = 1.0;                  // simplex
    }
    for (std::size_t i = 0; i < my; ++i) {
        lp.eq_b[i] = lx[i];
        lp.eq_a(my + i, k + i) = -1.0;
    }
    for (std::size_t i = 0; i < n; ++i)                // L* y* = x*
        for (std::size_t j = 0; j < my; ++j) lp.eq_a(2 * my + i, k + j) = l.matrix(j, i);
    for (std::size_t i = 0; i < n; ++i) lp.eq_b[2 * my + i] = xstar[i];
    lp.eq_b[2 * my + n] = 1.0;
    lp.bounds.assign(k + my, Bound::nonneg());
    for (std::size_t j = 0; j < my; ++j) lp.bounds[k + j] = Bound::free();
    LPSolution s = solve_lp(lp);
    if (status_out) *status_out = s.status;
    if (s.status == LPStatus::Infeasible) return ExtReal::pos_inf();
    if (s.status != LPStatus::Optimal)
        throw std::runtime_error("chain_representative_value: LP failure");
    return ExtReal(s.value);
}

namespace detail_calc {

// True when the closed-form kind degenerates to an indicator: sym part zero,
// so the function is finite exactly on { z* = Mx + q } with value <x, q>.
inline bool is_indicator_affine(const RepFunction& f) {
    if (f.kind != RepFunction::Kind::FitzAffineClosed) return false;
    Mat s = symmetric_part(f.m);
    for (double v : s.a)
        if (std::abs(v) > 1e-12) return false;
    return true;
}

}  // namespace detail_calc

// (h1 [][2] h2)(x, x*) = inf { h1(x, y*) + h2(x, x* - y*) : y* }.
inline ExtReal infconv2_value(const RepFunction& h1, const RepFunction& h2, const Vec& x,
                              const Vec& xstar) {
    const std::size_t n = x.size();
    // Unwrap skew shifts: shifting the second argument commutes with the
    // second-variable infimal convolution.
    if (h1.kind == RepFunction::Kind::Shifted)
        return infconv2_value(*h1.base, h2, x, sub(xstar, h1.skew.apply(x)));
    if (h2.kind == RepFunction::Kind::Shifted)
        return infconv2_value(h1, *h2.base, x, sub(xstar, h2.skew.apply(x)));

    // Indicator-type closed form pins the split exactly (the skew case).
    if (detail_calc::is_indicator_affine(h2)) {
        Vec z2 = add(h2.m.apply(x), h2.q);  // forced second share
        ExtReal v = evaluate_rep(h1, PairedPoint(x, sub(xstar, z2)));
        if (!v.finite()) return v;
        return ExtReal(v.value + dot(x, h2.q));
    }
    if (detail_calc::is_indicator_affine(h1)) return infconv2_value(h2, h1, x, xstar);

    const bool ff1 = h1.kind == RepFunction::Kind::FitzFinite;
    const bool ff2 = h2.kind == RepFunction::Kind::FitzFinite;
    if (ff1 && ff2) {
        // Epigraph LP: variables y* (free), t1, t2 (free); min t1 + t2.
        const std::size_t k1 = h1.points.size(), k2 = h2.points.size();
        LinearProgram lp;
        lp.objective.assign(n + 2, 0.0);
        lp.objective[n] = 1.0;
        lp.objective[n + 1] = 1.0;
        lp.ineq_a = Mat(k1 + k2, n + 2);
        lp.ineq_b.assign(k1 + k2, 0.0);
        for (std::size_t i = 0; i < k1; ++i) {
            const PairedPoint& a = h1.points[i];
            // <a.x, y*> - t1 <= p(a) - <a.x*, x>
            for (std::size_t j = 0; j < n; ++j) lp.ineq_a(i, j) = a.x[j];
            lp.ineq_a(i, n) = -1.0;
            lp.ineq_b[i] = pairing_p(a) - dot(a.xstar, x);
        }
        for (std::size_t i = 0; i < k2; ++i) {
            const PairedPoint& b = h2.points[i];
            // -<b.x, y*> - t2 <= p(b) - <b.x*, x> - <b.x, x*>
            for (std::size_t j = 0; j < n; ++j) lp.ineq_a(k1 + i, j) = -b.x[j];
            lp.ineq_a(k1 + i, n + 1) = -1.0;
            lp.ineq_b[k1 + i] = pairing_p(b) - dot(b.xstar, x) - dot(b.x, xstar);
        }
        lp.bounds.assign(n + 2, Bound::free());
        LPSolution s = solve_lp(lp);
        if (s.status == LPStatus::Unbounded) return ExtReal::neg_inf();
        if (s.status != LPStatus::Optimal) throw std::runtime_error("infconv2_value: LP failure");
        return ExtReal(s.value);
    }

    const bool fa1 = h1.kind == RepFunction::Kind::FitzAffineClosed;
    const bool fa2 = h2.kind == RepFunction::Kind::FitzAffineClosed;
    if (fa1 && fa2) {
        // Quadratic in y* over the affine set where both range tests hold.
        Mat s1 = symmetric_part(h1.m), s2 = symmetric_part(h2.m);
        Mat p1 = pseudo_inverse_matrix(s1), p2 = pseudo_inverse_matrix(s2);
        Vec w1 = sub(h1.m.apply_transposed(x), h1.q);              // v1 = y* + w1
        Vec w2 = add(xstar, sub(h2.m.apply_transposed(x), h2.q));  // v2 = -y* + w2
        Mat q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q(i, j) = 0.5 * (p1(i, j) + p2(i, j));
        Vec c = scale(0.5, sub(p1.apply(w1), p2.apply(w2)));
        double c0 = 0.25 * (dot(w1, p1.apply(w1)) + dot(w2, p2.apply(w2))) + dot(x, h1.q) +
                    dot(x, h2.q);
        std::vector<Vec> null1 = null_space(s1), null2 = null_space(s2);
        Mat e(null1.size() + null2.size(), n);
        Vec d(e.rows, 0.0);
        for (std::size_t r = 0; r < null1.size(); ++r) {
            for (std::size_t j = 0; j < n; ++j) e(r, j) = null1[r][j];
            d[r] = -dot(null1[r], w1);
        }
        for (std::size_t r = 0; r < null2.size(); ++r) {
            for (std::size_t j = 0; j < n; ++j) e(null1.size() + r, j) = null2[r][j];
            d[null1.size() + r] = dot(null2[r], w2);
        }
        return minimize_quadratic_on_affine(q, c, c0, e, d);
    }
    throw std::invalid_argument("infconv2_value: unsupported kind combination");
}

// Translation identity h_{A+B}(x, x*) = h_A(x, x* - Bx) for skew B, checked
// over the probe grid.  Exact closed forms when A is affine/skew/finite;
// sampled sups with a resolution-scaled tolerance otherwise.
inline CheckReport skew_shift_identity_check(const OperatorPtr& a, const Mat& b,
                                             const BoxProbe& probe) {
    const std::size_t n = a->dim;
    if (b.rows != n || b.cols != n)
        throw std::invalid_argument("skew_shift_identity_check: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(b(i, j) + b(j, i)) > 1e-12)
                throw std::invalid_argument("skew_shift_identity_check: B not skew");
    CheckReport rep;
    rep.what = "skew shift identity h_{A+B}(x,x*) = h_A(x,x*-Bx)";
    rep.resolution = probe.resolution;

    const AffineMonotone* aff = std::get_if<AffineMonotone>(&a->node);
    AffineMonotone tmp;
    if (const SkewLinear* sk = std::get_if<SkewLinear>(&a->node)) {
        tmp.m = sk->b;
        tmp.q = zeros(n);
        aff = &tmp;
    }
    const FiniteGraph* fin = std::get_if<FiniteGraph>(&a->node);
    const bool exact = aff != nullptr || fin != nullptr;

    FiniteGraph ga, gsum;
    Mat msum;
    Vec qsum;
    double tol;
    if (aff) {
        msum = aff->m;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) msum(i, j) += b(i, j);
        qsum = aff->q;
        tol = 1e-9;
    } else {
        if (fin)
            ga = *fin;
        else
            ga = discretize_graph(*a, probe);
        if (ga.points.empty()) {
            rep.verdict = Verdict::Error;
            return rep;
        }
        for (const PairedPoint& p : ga.points)
            gsum.points.emplace_back(p.x, add(p.xstar, b.apply(p.x)));
        if (fin) {
            tol = 1e-9;
        } else {
            double lip = 1.0;
            for (const PairedPoint& p : gsum.points)
                lip = std::max(lip, std::sqrt(dot(p.x, p.x) + dot(p.xstar, p.xstar)));
            tol = 3.0 * probe.resolution * lip;
        }
    }
    rep.tol = tol;

    double worst = 0.0;
    bool failed = false;
    PairedPoint witness;
    for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
        if (failed) return;
        PairedPoint z(Vec(zv.begin(), zv.begin() + static_cast<long>(n)),
                      Vec(zv.begin() + static_cast<long>(n), zv.end()));
        PairedPoint zs(z.x, sub(z.xstar, b.apply(z.x)));
        ExtReal lhs, rhs;
        if (aff) {
            lhs = fitzpatrick_affine_value(msum, qsum, z);
            rhs = fitzpatrick_affine_value(aff->m, aff->q, zs);
        } else {
            lhs = fitzpatrick_finite_value(gsum.points, z);
            rhs = fitzpatrick_finite_value(ga.points, zs);
        }
        if (!lhs.finite() && !rhs.finite()) return;
        if (lhs.finite() != rhs.finite()) {
            failed = true;
            witness = z;
            return;
        }
        double dev = std::abs(lhs.value - rhs.value);
        worst = std::max(worst, dev);
        if (dev > tol) {
            failed = true;
            witness = z;
        }
    });
    rep.worst = worst;
    if (failed) {
        rep.verdict = exact ? Verdict::Fails : Verdict::PossibleFail;
        rep.witness = witness;
    } else {
        rep.verdict = Verdict::HoldsAtResolution;
    }
    return rep;
}

// Chain identity for a convex-graph (affine) inner operator M:
//   h_T(x, x*) = min { h_M(Lx, y*) : L* y* = x* },  T = L*ML.
// The qualification 0 in the relative interior of R(L) - D(M) holds
// automatically here: D(M) is all of the codomain space.
inline CheckReport convex_graph_chain_check(const LinearMapRep& l, const Mat& m, const Vec& q,
                                            const BoxProbe& probe) {
    const std::size_t n = l.domain_dim(), my = l.codomain_dim();
    if (m.rows != my || q.size() != my)
        throw std::invalid_argument("convex_graph_chain_check: dimension mismatch");
    CheckReport rep;
    rep.what = "convex-graph chain identity h_T = min over the fiber of h_M";
    rep.tol = 1e-7;
    rep.resolution = probe.resolution;

    Mat lt = l.matrix.transposed();       // n x my
    Mat tmat = lt.mul(m).mul(l.matrix);   // L' M L
    Vec tq = l.apply_adjoint(q);
    Mat s = symmetric_part(m);
    Mat p = pseudo_inverse_matrix(s);
    std::vector<Vec> ns = null_space(s);

    double worst = 0.0;
    bool failed = false;
    PairedPoint witness;
    for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
        if (failed) return;
        PairedPoint z(Vec(zv.begin(), zv.begin() + static_cast<long>(n)),
                      Vec(zv.begin() + static_cast<long>(n), zv.end()));
        ExtReal lhs = fitzpatrick_affine_value(tmat, tq, z);
        // right side: quadratic in y* over {L* y* = x*} + range constraints
        Vec lx = l.apply(z.x);
        Vec w0 = sub(m.apply_transposed(lx), q);  // v = y* + w0
        Mat qq(my, my);
        for (std::size_t i = 0; i < my; ++i)
            for (std::size_t j = 0; j < my; ++j) qq(i, j) = 0.5 * p(i, j);
        Vec c = scale(0.5, p.apply(w0));
        double c0 = 0.25 * dot(w0, p.apply(w0)) + dot(lx, q);
        Mat e(n + ns.size(), my);
        Vec d(e.rows, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < my; ++j) e(i, j) = l.matrix(j, i);
            d[i] = z.xstar[i];
        }
        for (std::size_t r = 0; r < ns.size(); ++r) {
            for (std::size_t j = 0; j < my; ++j) e(n + r, j) = ns[r][j];
            d[n + r] = -dot(ns[r], w0);
        }
        ExtReal rhs = minimize_quadratic_on_affine(qq, c, c0, e, d);
        if (!lhs.finite() && !rhs.finite()) return;
        if (lhs.finite() != rhs.finite()) {
            failed = true;
            witness = z;
            return;
        }
        double dev = std::abs(lhs.value - rhs.value);
        worst = std::max(worst, dev);
        if (dev > rep.tol) {
            failed = true;
            witness = z;
        }
    });
    rep.worst = worst;
    if (failed) {
        rep.verdict = Verdict::Fails;
        rep.witness = witness;
    } else {
        rep.verdict = Verdict::HoldsAtResolution;
    }
    return rep;
}

}  // namespace monorep
