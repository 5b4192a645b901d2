#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "operators.hpp"
#include "polytope.hpp"
#include "report.hpp"

// Qualification-constraint machinery: relative interiors of polyhedral sets,
// Minkowski differences of domains, the normal-cone sum/chain identities,
// domain invariance M = M + N_{D(M)}, and the difference-map equivalence.
// In R^n affine hulls are closed, so the "ic" and "i" interiors coincide.

namespace monorep {

struct ConvexSetRep {
    GenPolytope base;
    std::size_t affine_hull_dim = 0;
};

inline ConvexSetRep convex_set(GenPolytope p) {
    ConvexSetRep s;
    s.base = std::move(p);
    if (!s.base.empty && !s.base.vertices.empty()) {
        std::vector<Vec> span;
        for (std::size_t i = 1; i < s.base.vertices.size(); ++i)
            span.push_back(sub(s.base.vertices[i], s.base.vertices[0]));
        span.insert(span.end(), s.base.rays.begin(), s.base.rays.end());
        s.affine_hull_dim = rank_of_span(span);
    }
    return s;
}

inline ConvexSetRep minkowski_diff(const ConvexSetRep& u, const ConvexSetRep& v) {
    if (u.base.empty || v.base.empty) return convex_set(GenPolytope::make_empty());
    GenPolytope d;
    for (const Vec& a : u.base.vertices)
        for (const Vec& b : v.base.vertices) d.vertices.push_back(sub(a, b));
    d.rays = u.base.rays;
    for (const Vec& r : v.base.rays) d.rays.push_back(scale(-1.0, r));
    return convex_set(prune_redundant_vertices(d));
}

namespace detail_qual {

// max t s.t. sum l_i v_i + sum m_j r_j = 0, sum l_i = 1, l_i >= t, m >= 0.
inline double relint_lp_margin(const GenPolytope& p) {
    const std::size_t n = p.dim(), nv = p.vertices.size(), nr = p.rays.size();
    LinearProgram lp;
    lp.objective.assign(nv + nr + 1, 0.0);
    lp.objective[nv + nr] = -1.0;  // maximize t
    lp.eq_a = Mat(n + 1, nv + nr + 1);
    lp.eq_b.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, j) = p.vertices[j][i];
        lp.eq_a(n, j) = 1.0;
    }
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, nv + j) = p.rays[j][i];
    lp.eq_b[n] = 1.0;
    lp.ineq_a = Mat(nv, nv + nr + 1);  // t - l_i <= 0
    lp.ineq_b.assign(nv, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        lp.ineq_a(j, j) = -1.0;
        lp.ineq_a(j, nv + nr) = 1.0;
    }
    lp.bounds.assign(nv + nr + 1, Bound::nonneg());
    lp.bounds[nv + nr] = Bound::free();
    LPSolution s = solve_lp(lp);
    if (s.status == LPStatus::Unbounded) return std::numeric_limits<double>::infinity();
    if (s.status != LPStatus::Optimal) return -std::numeric_limits<double>::infinity();
    return -s.value;
}

// Is -r in the conic hull of the rays?  (subspace test for recession cones)
inline bool recession_is_subspace(const GenPolytope& p) {
    GenPolytope cone;
    cone.vertices.push_back(zeros(p.dim()));
    cone.rays = p.rays;
    for (const Vec& r : p.rays)
        if (!contains_point(cone, scale(-1.0, r))) return false;
    return true;
}

inline std::vector<Vec> affine_hull_basis(const GenPolytope& p) {
    std::vector<Vec> span;
    for (std::size_t i = 1; i < p.vertices.size(); ++i)
        span.push_back(sub(p.vertices[i], p.vertices[0]));
    span.insert(span.end(), p.rays.begin(), p.rays.end());
    return orthonormal_span(span);
}

}  // namespace detail_qual

// 0 in relint(S), for polyhedral S in generator form.
inline bool relint_contains_zero(const ConvexSetRep& s) {
    if (s.base.empty || s.base.vertices.empty())
        throw std::invalid_argument("relint_contains_zero: empty set");
    const GenPolytope& p = s.base;
    if (p.rays.empty()) return detail_qual::relint_lp_margin(p) > 1e-9;
    if (detail_qual::recession_is_subspace(p)) {
        // Split off the lineality subspace: project the vertex polytope onto
        // its orthogonal complement and recurse on the bounded part.
        std::vector<Vec> lin = orthonormal_span(p.rays);
        GenPolytope proj;
        for (const Vec& v : p.vertices) {
            Vec w = v;
            for (const Vec& b : lin) {
                double c = dot(w, b);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
            }
            proj.vertices.push_back(w);
        }
        return detail_qual::relint_lp_margin(prune_redundant_vertices(proj)) > 1e-9;
    }
    // General recession cone: LP margin plus a small ball probe along the
    // affine hull (each direction must admit a 1e-6 step staying inside).
    if (!(detail_qual::relint_lp_margin(p) > 1e-9)) return false;
    for (const Vec& h : detail_qual::affine_hull_basis(p)) {
        if (!contains_point(p, scale(1e-6, h))) return false;
        if (!contains_point(p, scale(-1e-6, h))) return false;
    }
    return true;
}

// Sum-rule qualification: 0 in relint(D(A) - D(B)).
inline CheckReport qualification_sum(const OperatorRep& a, const OperatorRep& b) {
    CheckReport rep;
    rep.what = "sum qualification 0 in relint(D(A) - D(B))";
    ConvexSetRep da = convex_set(domain(a)), db = convex_set(domain(b));
    if (da.base.empty || db.base.empty) {
        rep.verdict = Verdict::Error;
        return rep;
    }
    rep.verdict = relint_contains_zero(minkowski_diff(da, db)) ? Verdict::Holds : Verdict::Fails;
    return rep;
}

// Chain qualification: 0 in relint(R(L) - D(M)).  R(L) is a subspace, so
// this reduces to 0 in relint of the projection of D(M) onto R(L) orthogonal.
inline CheckReport qualification_chain(const LinearMapRep& l, const OperatorRep& m) {
    CheckReport rep;
    rep.what = "chain qualification 0 in relint(R(L) - D(M))";
    GenPolytope dm = domain(m);
    if (dm.empty) {
        rep.verdict = Verdict::Error;
        return rep;
    }
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < l.matrix.cols; ++j) {
        Vec c(l.matrix.rows);
        for (std::size_t i = 0; i < l.matrix.rows; ++i) c[i] = l.matrix(i, j);
        cols.push_back(std::move(c));
    }
    std::vector<Vec> range_basis = orthonormal_span(cols);
    auto project = [&](Vec w) {
        for (const Vec& b : range_basis) {
            double c = dot(w, b);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
        }
        return w;
    };
    GenPolytope proj;
    for (const Vec& v : dm.vertices) proj.vertices.push_back(project(v));
    for (const Vec& r : dm.rays) {
        Vec pr = project(r);
        if (norm2(pr) > 1e-12) proj.rays.push_back(pr);
    }
    rep.verdict = relint_contains_zero(convex_set(prune_redundant_vertices(proj)))
                      ? Verdict::Holds
                      : Verdict::Fails;
    return rep;
}

namespace detail_qual {

// Does a point of P satisfy every halfspace of hs strictly (slack >= eps)?
inline bool strict_intersection(const GenPolytope& p, const HalfspaceList& hs, std::size_t n,
                                double eps = 1e-6) {
    if (p.empty) return false;
    if (hs.empty()) return true;  // interior is everything
    const std::size_t nv = p.vertices.size(), nr = p.rays.size();
    LinearProgram lp;  // vars: x (free), lambda, mu
    lp.objective.assign(n + nv + nr, 0.0);
    lp.eq_a = Mat(n + 1, n + nv + nr);
    lp.eq_b.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, i) = -1.0;
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, n + j) = p.vertices[j][i];
        lp.eq_a(n, n + j) = 1.0;
    }
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, n + nv + j) = p.rays[j][i];
    lp.eq_b[n] = 1.0;
    lp.ineq_a = Mat(hs.size(), n + nv + nr);
    lp.ineq_b.assign(hs.size(), 0.0);
    for (std::size_t r = 0; r < hs.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) lp.ineq_a(r, i) = hs[r].g[i];
        lp.ineq_b[r] = hs[r].c - eps * std::max(1.0, norm2(hs[r].g));
    }
    lp.bounds.assign(n + nv + nr, Bound::nonneg());
    for (std::size_t i = 0; i < n; ++i) lp.bounds[i] = Bound::free();
    return lp_feasible(lp);
}

inline bool set_contained(const GenPolytope& inner, const GenPolytope& outer) {
    if (inner.empty) return true;
    if (outer.empty) return false;
    for (const Vec& v : inner.vertices)
        if (!contains_point(outer, v)) return false;
    GenPolytope rec;  // recession cone of the outer set
    rec.vertices.push_back(zeros(outer.dim()));
    rec.rays = outer.rays;
    for (const Vec& r : inner.rays)
        if (!contains_point(rec, r)) return false;
    return true;
}

inline bool maximal_class(const OperatorRep& op) {
    return std::holds_alternative<AffineMonotone>(op.node) ||
           std::holds_alternative<SkewLinear>(op.node) ||
           std::holds_alternative<SubdiffPL>(op.node) ||
           std::holds_alternative<NormalConeOp>(op.node);
}

}  // namespace detail_qual

// Alternative interiority hypotheses for the sum rule:
//   (gamma) D(A) meets int D(B); (delta) D(A) inside D(B);
//   (epsilon) 0 in relint(D(A) - P_X D(h_B)), with P_X D(h_B) replaced by
//   D(B) when B is maximal with closed convex domain.
// Overall verdict holds when any sub-hypothesis does.
inline CheckReport interiority_checks(const OperatorRep& a, const OperatorRep& b) {
    CheckReport rep;
    rep.what = "sum interiority hypotheses (gamma/delta/epsilon)";
    GenPolytope da = domain(a), db = domain(b);
    std::optional<HalfspaceList> hb = domain_halfspaces(b);

    CheckReport gamma;
    gamma.what = "(gamma) D(A) meets int D(B)";
    if (hb)
        gamma.verdict = detail_qual::strict_intersection(da, *hb, a.dim) ? Verdict::Holds
                                                                         : Verdict::Fails;
    else
        gamma.verdict = Verdict::Inapplicable;

    CheckReport delta;
    delta.what = "(delta) D(A) inside D(B)";
    delta.verdict = detail_qual::set_contained(da, db) ? Verdict::Holds : Verdict::Fails;

    CheckReport eps;
    eps.what = "(epsilon) 0 in relint(D(A) - P_X D(h_B))";
    if (detail_qual::maximal_class(b)) {
        // For maximal B with closed convex domain, P_X D(h_B) = D(B).
        eps.verdict = relint_contains_zero(minkowski_diff(convex_set(da), convex_set(db)))
                          ? Verdict::Holds
                          : Verdict::Fails;
    } else {
        eps.verdict = Verdict::Inapplicable;
    }

    rep.sub = {gamma, delta, eps};
    bool any = false, all_inapplicable = true;
    for (const CheckReport& s : rep.sub) {
        if (s.verdict == Verdict::Holds) any = true;
        if (s.verdict != Verdict::Inapplicable) all_inapplicable = false;
    }
    rep.verdict = any ? Verdict::Holds : (all_inapplicable ? Verdict::Inapplicable : Verdict::Fails);
    return rep;
}

// Chain-side interiority: R(L) meets int D(M).
inline CheckReport interiority_chain_check(const LinearMapRep& l, const OperatorRep& m) {
    CheckReport rep;
    rep.what = "(gamma) R(L) meets int D(M)";
    std::optional<HalfspaceList> hm = domain_halfspaces(m);
    if (!hm) {
        rep.verdict = Verdict::Inapplicable;
        return rep;
    }
    GenPolytope range;  // R(L) as a generator set
    range.vertices.push_back(zeros(l.codomain_dim()));
    for (std::size_t j = 0; j < l.matrix.cols; ++j) {
        Vec c(l.matrix.rows);
        for (std::size_t i = 0; i < l.matrix.rows; ++i) c[i] = l.matrix(i, j);
        if (norm2(c) > 1e-12) {
            range.rays.push_back(c);
            range.rays.push_back(scale(-1.0, c));
        }
    }
    rep.verdict = detail_qual::strict_intersection(range, *hm, l.codomain_dim())
                      ? Verdict::Holds
                      : Verdict::Fails;
    return rep;
}

inline GenPolytope normal_cone_value(const HalfspaceList& c, const Vec& x) {
    return normal_cone_at(c, x, 1e-9);
}

// N_{CA cap CB}(x) = N_CA(x) + N_CB(x) at each sample.
inline CheckReport ncone_sum_check(const HalfspaceList& ca, const HalfspaceList& cb,
                                   const std::vector<Vec>& samples) {
    CheckReport rep;
    rep.what = "normal cone sum identity N_{A cap B} = N_A + N_B";
    if (samples.empty()) throw std::invalid_argument("ncone_sum_check: no samples");
    HalfspaceList both = ca;
    both.insert(both.end(), cb.begin(), cb.end());
    if (!halfspaces_nonempty(both, samples[0].size()))
        throw std::invalid_argument("ncone_sum_check: empty intersection");
    rep.verdict = Verdict::Holds;
    for (const Vec& x : samples) {
        GenPolytope left = normal_cone_at(both, x);
        GenPolytope na = normal_cone_at(ca, x), nb = normal_cone_at(cb, x);
        GenPolytope right;
        right.vertices.push_back(zeros(x.size()));
        right.rays = na.rays;
        right.rays.insert(right.rays.end(), nb.rays.begin(), nb.rays.end());
        if (!cone_equality(left, right)) {
            rep.verdict = Verdict::Fails;
            rep.witness = PairedPoint(x, zeros(x.size()));
            break;
        }
    }
    return rep;
}

// N_{L^{-1}(CM)}(x) = L* N_CM(Lx) at each sample.
inline CheckReport ncone_chain_check(const LinearMapRep& l, const HalfspaceList& cm,
                                     const std::vector<Vec>& samples) {
    CheckReport rep;
    rep.what = "normal cone chain identity N_{D(T)} = L* N_{D(M)} L";
    HalfspaceList composed;
    for (const Halfspace& h : cm) composed.push_back({l.apply_adjoint(h.g), h.c});
    rep.verdict = Verdict::Holds;
    for (const Vec& x : samples) {
        GenPolytope left = normal_cone_at(composed, x);
        GenPolytope nm = normal_cone_at(cm, l.apply(x));
        GenPolytope right;
        right.vertices.push_back(zeros(x.size()));
        for (const Vec& r : nm.rays) {
            Vec lr = l.apply_adjoint(r);
            if (norm2(lr) > 1e-12) right.rays.push_back(lr);
        }
        if (!cone_equality(left, right)) {
            rep.verdict = Verdict::Fails;
            rep.witness = PairedPoint(x, zeros(x.size()));
            break;
        }
    }
    return rep;
}

namespace detail_qual {

// Exact decision of "exists x* with h_M(x, .) finite", per representation.
// Returns nullopt when no exact test is available for the kind.
inline std::optional<bool> h_finite_slice(const OperatorRep& op, const Vec& x) {
    if (std::holds_alternative<AffineMonotone>(op.node) ||
        std::holds_alternative<SkewLinear>(op.node) ||
        std::holds_alternative<SubdiffPL>(op.node) ||
        std::holds_alternative<FiniteGraph>(op.node))
        return true;  // full domain / bounded graph: h finite somewhere on the slice
    if (const NormalConeOp* nc = std::get_if<NormalConeOp>(&op.node))
        // h_{N_C}(x, x*) = sigma_C(x*) when x in C, +inf otherwise
        return halfspaces_contain(nc->c, x, 1e-9);
    return std::nullopt;
}

}  // namespace detail_qual

// Domain-invariance hypothesis M = M + N_{D(M)} at the given samples, plus the
// projection conclusion P_Y D(h_M) inside D(M) probed on the grid when an
// exact finiteness test exists for the representation.
inline CheckReport domain_invariance_check(const OperatorRep& m, const std::vector<Vec>& samples,
                                           const BoxProbe& probe) {
    CheckReport rep;
    rep.what = "domain invariance M = M + N_{D(M)}";
    rep.tol = 1e-9;
    rep.resolution = probe.resolution;
    std::optional<HalfspaceList> hs = domain_halfspaces(m);
    if (!hs) {
        rep.verdict = Verdict::Inapplicable;
        return rep;
    }
    const std::size_t n = m.dim;
    // Fixed pseudo-random probe directions (deterministic LCG).
    std::vector<Vec> dirs;
    unsigned long long state = 0x9e3779b97f4a7c15ULL;
    auto next = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>((state >> 11) & 0xffffffULL) / double(0xffffffULL) * 2.0 - 1.0;
    };
    for (int k = 0; k < 16; ++k) {
        Vec d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = next();
        double nd = norm2(d);
        if (nd > 1e-9) dirs.push_back(scale(1.0 / nd, d));
    }

    rep.verdict = Verdict::HoldsAtResolution;
    for (const Vec& x : samples) {
        GenPolytope val = evaluate(m, x);
        if (val.empty) {
            rep.verdict = Verdict::Error;
            return rep;
        }
        GenPolytope ncone = normal_cone_at(*hs, x);
        GenPolytope sum = minkowski_sum(val, ncone);
        for (const Vec& d : dirs) {
            ExtReal s1 = support_value(val, d), s2 = support_value(sum, d);
            if (!ext_close(s1, s2, rep.tol)) {
                rep.verdict = Verdict::Fails;
                rep.witness = PairedPoint(x, d);
                return rep;
            }
        }
    }

    // Projection probe: every grid x on which h_M is finite for some x*
    // must lie within 10*resolution of D(M).
    CheckReport proj;
    proj.what = "projection P_Y D(h_M) inside D(M)";
    proj.tol = 10.0 * probe.resolution;
    proj.verdict = Verdict::HoldsAtResolution;
    bool decided = true;
    for_each_grid(probe, 0, n, [&](const Vec& x) {
        if (proj.verdict == Verdict::Fails || !decided) return;
        std::optional<bool> fin = detail_qual::h_finite_slice(m, x);
        if (!fin) {
            decided = false;
            return;
        }
        if (!*fin) return;
        double viol = 0.0;
        for (const Halfspace& h : *hs)
            viol = std::max(viol, (dot(h.g, x) - h.c) / std::max(norm2(h.g), 1e-30));
        if (viol > proj.tol) {
            proj.verdict = Verdict::Fails;
            proj.witness = PairedPoint(x, zeros(n));
        }
    });
    if (!decided) proj.verdict = Verdict::Inapplicable;
    rep.sub.push_back(proj);
    if (proj.verdict == Verdict::Fails) rep.verdict = Verdict::Fails;
    return rep;
}

// Difference-map equivalence through the diagonal map: the two relint verdicts
// (0 in relint(R(L) - U x V) and 0 in relint(U - V)) must agree.
inline CheckReport difference_map_equivalence(const ConvexSetRep& u, const ConvexSetRep& v) {
    CheckReport rep;
    rep.what = "difference map equivalence (diagonal chain vs direct difference)";
    if (u.base.empty || v.base.empty) {
        rep.verdict = Verdict::Error;
        return rep;
    }
    const std::size_t n = u.base.dim();
    // Left: project U x V onto the orthogonal complement of the diagonal.
    GenPolytope cross;
    auto paste = [&](const Vec& a, const Vec& b) {
        Vec w(2 * n);
        std::copy(a.begin(), a.end(), w.begin());
        std::copy(b.begin(), b.end(), w.begin() + static_cast<long>(n));
        return w;
    };
    for (const Vec& a : u.base.vertices)
        for (const Vec& b : v.base.vertices) cross.vertices.push_back(paste(a, b));
    for (const Vec& r : u.base.rays) cross.rays.push_back(paste(r, zeros(n)));
    for (const Vec& r : v.base.rays) cross.rays.push_back(paste(zeros(n), r));
    // R(L) for the diagonal map is spanned by the doubled basis vectors.
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < n; ++j) {
        Vec c(2 * n, 0.0);
        c[j] = 1.0;
        c[n + j] = 1.0;
        cols.push_back(std::move(c));
    }
    std::vector<Vec> basis = orthonormal_span(cols);
    auto project = [&](Vec w) {
        for (const Vec& b : basis) {
            double c = dot(w, b);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
        }
        return w;
    };
    GenPolytope proj;
    for (const Vec& w : cross.vertices) proj.vertices.push_back(project(w));
    for (const Vec& r : cross.rays) {
        Vec pr = project(r);
        if (norm2(pr) > 1e-12) proj.rays.push_back(pr);
    }
    bool left = relint_contains_zero(convex_set(prune_redundant_vertices(proj)));
    bool right = relint_contains_zero(minkowski_diff(u, v));
    rep.verdict = left == right ? Verdict::Holds : Verdict::Fails;
    rep.worst = left == right ? 0.0 : 1.0;
    return rep;
}

namespace detail_qual {

inline bool is_linear(const OperatorRep& op) {
    if (const AffineMonotone* a = std::get_if<AffineMonotone>(&op.node))
        return norm_inf(a->q) <= 1e-12;
    if (std::holds_alternative<SkewLinear>(op.node)) return true;
    if (const SumOp* s = std::get_if<SumOp>(&op.node))
        return is_linear(*s->left) && is_linear(*s->right);
    if (const PrecompOp* p = std::get_if<PrecompOp>(&op.node)) return is_linear(*p->inner);
    return false;
}

}  // namespace detail_qual

// For linear A, B the domain difference is a subspace, hence closed; report
// HOLDS with the subspace dimension recorded in `worst`.
inline CheckReport linear_closedness_check(const OperatorRep& a, const OperatorRep& b) {
    if (!detail_qual::is_linear(a) || !detail_qual::is_linear(b))
        throw std::invalid_argument("linear_closedness_check: operators must be linear");
    CheckReport rep;
    rep.what = "D(A) - D(B) closed (subspace difference)";
    GenPolytope da = domain(a), db = domain(b);
    std::vector<Vec> span;
    auto collect = [&](const GenPolytope& d) {
        for (std::size_t i = 1; i < d.vertices.size(); ++i)
            span.push_back(sub(d.vertices[i], d.vertices[0]));
        span.insert(span.end(), d.rays.begin(), d.rays.end());
    };
    collect(da);
    collect(db);
    rep.worst = static_cast<double>(rank_of_span(span));
    rep.verdict = Verdict::Holds;
    return rep;
}

}  // namespace monorep
