#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "lp.hpp"

// Convex sets in vertex+ray form (generators of conv(V) + cone(R)), plus
// halfspace lists as the input form for normal cones and domains.

namespace monorep {

struct GenPolytope {
    std::vector<Vec> vertices;
    std::vector<Vec> rays;
    bool empty = false;

    static GenPolytope make_empty() {
        GenPolytope p;
        p.empty = true;
        return p;
    }
    static GenPolytope point(Vec v) {
        GenPolytope p;
        p.vertices.push_back(std::move(v));
        return p;
    }
    static GenPolytope full_space(std::size_t n) {
        GenPolytope p;
        p.vertices.push_back(zeros(n));
        for (std::size_t i = 0; i < n; ++i) {
            p.rays.push_back(unit(n, i, 1.0));
            p.rays.push_back(unit(n, i, -1.0));
        }
        return p;
    }

    std::size_t dim() const {
        if (!vertices.empty()) return vertices[0].size();
        if (!rays.empty()) return rays[0].size();
        return 0;
    }
    bool is_cone() const { return vertices.size() == 1 && norm_inf(vertices[0]) <= 1e-12; }
};

// sup over the set of <d, y>; +inf when some ray points into d.
inline ExtReal support_value(const GenPolytope& p, const Vec& d, double ray_tol = 1e-9) {
    if (p.empty) return ExtReal::neg_inf();
    for (const Vec& r : p.rays)
        if (dot(d, r) > ray_tol * std::max(1.0, norm2(r))) return ExtReal::pos_inf();
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : p.vertices) best = std::max(best, dot(d, v));
    return ExtReal(best);
}

inline GenPolytope minkowski_sum(const GenPolytope& a, const GenPolytope& b) {
    if (a.empty || b.empty) return GenPolytope::make_empty();
    GenPolytope r;
    for (const Vec& u : a.vertices)
        for (const Vec& v : b.vertices) r.vertices.push_back(add(u, v));
    r.rays = a.rays;
    r.rays.insert(r.rays.end(), b.rays.begin(), b.rays.end());
    return r;
}

// Image {M y : y in p} under a linear map.
inline GenPolytope linear_image(const Mat& m, const GenPolytope& p) {
    if (p.empty) return GenPolytope::make_empty();
    GenPolytope r;
    for (const Vec& v : p.vertices) r.vertices.push_back(m.apply(v));
    for (const Vec& d : p.rays) {
        Vec md = m.apply(d);
        if (norm2(md) > 1e-12) r.rays.push_back(md);
    }
    return r;
}

// Membership x in conv(V)+cone(R), via LP feasibility.
inline bool contains_point(const GenPolytope& p, const Vec& x, double tol = 1e-9) {
    if (p.empty) return false;
    const std::size_t n = p.dim();
    const std::size_t nv = p.vertices.size(), nr = p.rays.size();
    LinearProgram lp;
    lp.objective.assign(nv + nr, 0.0);
    lp.eq_a = Mat(n + 1, nv + nr);
    lp.eq_b.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, j) = p.vertices[j][i];
        lp.eq_a(n, j) = 1.0;
    }
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, nv + j) = p.rays[j][i];
    for (std::size_t i = 0; i < n; ++i) lp.eq_b[i] = x[i];
    lp.eq_b[n] = 1.0;
    (void)tol;
    return lp_feasible(lp);
}

// Drop vertices lying in the hull of the remaining generators.
inline GenPolytope prune_redundant_vertices(const GenPolytope& p) {
    if (p.empty || p.vertices.size() <= 1) return p;
    GenPolytope r = p;
    for (std::size_t k = 0; k < r.vertices.size() && r.vertices.size() > 1;) {
        GenPolytope rest = r;
        rest.vertices.erase(rest.vertices.begin() + static_cast<long>(k));
        if (contains_point(rest, r.vertices[k]))
            r.vertices.erase(r.vertices.begin() + static_cast<long>(k));
        else
            ++k;
    }
    return r;
}

// Halfspace list: { x : <g_j, x> <= c_j }.
struct Halfspace {
    Vec g;
    double c = 0.0;
};
using HalfspaceList = std::vector<Halfspace>;

inline bool halfspaces_contain(const HalfspaceList& hs, const Vec& x, double tol = 1e-9) {
    for (const Halfspace& h : hs)
        if (dot(h.g, x) > h.c + tol) return false;
    return true;
}

inline bool halfspaces_nonempty(const HalfspaceList& hs, std::size_t n) {
    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    lp.ineq_a = Mat(hs.size(), n);
    lp.ineq_b.assign(hs.size(), 0.0);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) lp.ineq_a(i, j) = hs[i].g[j];
        lp.ineq_b[i] = hs[i].c;
    }
    lp.bounds.assign(n, Bound::free());
    return lp_feasible(lp);
}

// Intervals for n = 1: C = [lo, hi] as two halfspaces.
inline HalfspaceList interval(double lo, double hi) {
    return {{{-1.0}, -lo}, {{1.0}, hi}};
}

inline HalfspaceList box(const Vec& lo, const Vec& hi) {
    HalfspaceList hs;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        hs.push_back({unit(lo.size(), i, -1.0), -lo[i]});
        hs.push_back({unit(lo.size(), i, 1.0), hi[i]});
    }
    return hs;
}

namespace detail_poly {

// Enumerate index subsets of size k out of [0, n).
inline void subsets(std::size_t n, std::size_t k,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) {
            fn(idx);
            return;
        }
        for (std::size_t i = start; i + (k - depth) <= n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

}  // namespace detail_poly

// Convert a halfspace description to vertex+ray form by brute-force face
// enumeration; intended for dim <= 3 and short constraint lists.
inline GenPolytope halfspaces_to_generators(const HalfspaceList& hs, std::size_t n) {
    if (!halfspaces_nonempty(hs, n)) return GenPolytope::make_empty();
    GenPolytope p;
    const double tol = 1e-9;
    auto feasible = [&](const Vec& x) { return halfspaces_contain(hs, x, 1e-7); };

    // With a nontrivial lineality space, vertex enumeration degenerates: the
    // minimal faces are affine.  Factor the lineality out, enumerate in the
    // quotient, and lift the generators back.
    {
        Mat g0(hs.size(), n);
        for (std::size_t i = 0; i < hs.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) g0(i, j) = hs[i].g[j];
        std::vector<Vec> lin = null_space(g0);
        if (!lin.empty()) {
            std::vector<Vec> comp = null_space(Mat::from_rows(lin));
            if (comp.empty()) {
                p.vertices.push_back(zeros(n));
            } else {
                HalfspaceList qh;
                for (const Halfspace& h : hs) {
                    Vec gq(comp.size());
                    for (std::size_t j = 0; j < comp.size(); ++j) gq[j] = dot(h.g, comp[j]);
                    qh.push_back({gq, h.c});
                }
                GenPolytope q = halfspaces_to_generators(qh, comp.size());
                if (q.empty) return GenPolytope::make_empty();
                auto lift = [&](const Vec& u) {
                    Vec x = zeros(n);
                    for (std::size_t j = 0; j < comp.size(); ++j)
                        x = add(x, scale(u[j], comp[j]));
                    return x;
                };
                for (const Vec& v : q.vertices) p.vertices.push_back(lift(v));
                for (const Vec& r : q.rays) p.rays.push_back(lift(r));
            }
            for (const Vec& d : lin) {
                p.rays.push_back(d);
                p.rays.push_back(scale(-1.0, d));
            }
            return prune_redundant_vertices(p);
        }
    }

    // Vertex candidates: solutions of n active constraints.
    if (!hs.empty() && n >= 1) {
        detail_poly::subsets(hs.size(), n, [&](const std::vector<std::size_t>& idx) {
            Mat a(n, n);
            Vec b(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) a(i, j) = hs[idx[i]].g[j];
                b[i] = hs[idx[i]].c;
            }
            LstsqResult ls = least_squares(a, b);
            if (!ls.feasible) return;
            if (null_space(a).empty() && feasible(ls.x)) {
                for (const Vec& v : p.vertices)
                    if (norm_inf(sub(v, ls.x)) <= 1e-7) return;
                p.vertices.push_back(ls.x);
            }
        });
    }

    // Recession cone {d : G d <= 0}; extreme rays from n-1 active constraints,
    // plus the lineality space split into +/- generators.
    Mat g(hs.size(), n);
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = hs[i].g[j];
    auto ray_feasible = [&](const Vec& d) {
        Vec gd = g.apply(d);
        for (double v : gd)
            if (v > tol) return false;
        return true;
    };
    std::vector<Vec> lin = null_space(g);
    for (const Vec& d : lin) {
        p.rays.push_back(d);
        p.rays.push_back(scale(-1.0, d));
    }
    if (n >= 1 && hs.size() + 1 >= n) {
        std::size_t k = n - 1;
        detail_poly::subsets(hs.size(), k, [&](const std::vector<std::size_t>& idx) {
            Mat a(k, n);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) = hs[idx[i]].g[j];
            std::vector<Vec> ns = k == 0 ? std::vector<Vec>{} : null_space(a);
            if (k == 0 && n == 1) ns = {Vec{1.0}};
            if (ns.size() != 1) return;
            for (double s : {1.0, -1.0}) {
                Vec d = scale(s, ns[0]);
                if (!ray_feasible(d)) continue;
                bool dup = false;
                for (const Vec& r : p.rays) {
                    Vec rn = scale(1.0 / std::max(norm2(r), 1e-30), r);
                    Vec dn = scale(1.0 / std::max(norm2(d), 1e-30), d);
                    if (norm_inf(sub(rn, dn)) <= 1e-7) dup = true;
                }
                if (!dup) p.rays.push_back(d);
            }
        });
    }

    if (p.vertices.empty()) {
        // No vertex (lineality present): anchor at any feasible point.
        LinearProgram lp;
        lp.objective.assign(n, 0.0);
        lp.ineq_a = g;
        lp.ineq_b.assign(hs.size(), 0.0);
        for (std::size_t i = 0; i < hs.size(); ++i) lp.ineq_b[i] = hs[i].c;
        lp.bounds.assign(n, Bound::free());
        LPSolution s = solve_lp(lp);
        if (s.status != LPStatus::Optimal) return GenPolytope::make_empty();
        p.vertices.push_back(s.point);
    }
    return prune_redundant_vertices(p);
}

// Outward-normal cone of {x : G x <= c} at a feasible x: cone of active normals.
inline GenPolytope normal_cone_at(const HalfspaceList& hs, const Vec& x, double tol = 1e-9) {
    if (!halfspaces_contain(hs, x, tol))
        throw std::invalid_argument("normal_cone_at: point outside the set");
    GenPolytope cone;
    cone.vertices.push_back(zeros(x.size()));
    for (const Halfspace& h : hs)
        if (dot(h.g, x) >= h.c - tol) cone.rays.push_back(h.g);
    return cone;
}

// Mutual conic-hull containment of generators (both args must be cones).
inline bool cone_equality(const GenPolytope& c1, const GenPolytope& c2, double tol = 1e-9) {
    if (!c1.is_cone() || !c2.is_cone())
        throw std::invalid_argument("cone_equality: inputs must be cones with vertex 0");
    auto in_cone = [&](const GenPolytope& cone, const Vec& d) {
        if (norm2(d) <= tol) return true;
        const std::size_t n = d.size(), nr = cone.rays.size();
        LinearProgram lp;
        lp.objective.assign(nr, 0.0);
        lp.eq_a = Mat(n, nr);
        lp.eq_b = d;
        for (std::size_t j = 0; j < nr; ++j)
            for (std::size_t i = 0; i < n; ++i) lp.eq_a(i, j) = cone.rays[j][i];
        return lp_feasible(lp);
    };
    for (const Vec& r : c1.rays)
        if (!in_cone(c2, r)) return false;
    for (const Vec& r : c2.rays)
        if (!in_cone(c1, r)) return false;
    return true;
}

}  // namespace monorep
