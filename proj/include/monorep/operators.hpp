#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "core.hpp"
#include "linalg.hpp"
#include "polytope.hpp"
#include "report.hpp"

// Multi-valued monotone operator representations and the graph-level
// machinery: evaluation, domains, discretization, monotonicity tests and
// the monotonically-related infimum behind the Fitzpatrick alt form.

namespace monorep {

struct LinearMapRep {
    Mat matrix;  // L : R^n -> R^m

    std::size_t domain_dim() const { return matrix.cols; }
    std::size_t codomain_dim() const { return matrix.rows; }
    Vec apply(const Vec& x) const { return matrix.apply(x); }
    Vec apply_adjoint(const Vec& ystar) const { return matrix.apply_transposed(ystar); }
};

struct FiniteGraph {
    std::vector<PairedPoint> points;
};

// Ax = {Mx + q}; requires sym(M) PSD up to -1e-9.
struct AffineMonotone {
    Mat m;
    Vec q;
};

// B + B' = 0; the graph {(x, Bx)} of a skew map.
struct SkewLinear {
    Mat b;
};

// A = subdifferential of f(x) = max_i (<a_i, x> + b_i).
struct SubdiffPL {
    std::vector<Vec> slopes;
    Vec offsets;
};

// A = normal cone operator of C = {x : <g_j, x> <= c_j}.
struct NormalConeOp {
    HalfspaceList c;
    std::size_t n = 0;
};

struct OperatorRep;
using OperatorPtr = std::shared_ptr<const OperatorRep>;

struct SumOp {
    OperatorPtr left, right;
};

struct PrecompOp {
    LinearMapRep l;       // T = L* M L
    OperatorPtr inner;
};

// M(x1, x2) = (A x1) x (B x2) on the product space.
struct ProductOp {
    OperatorPtr left, right;
};

struct OperatorRep {
    std::variant<FiniteGraph, AffineMonotone, SkewLinear, SubdiffPL, NormalConeOp, SumOp,
                 PrecompOp, ProductOp>
        node;
    std::size_t dim = 0;  // dimension of X
};

inline OperatorPtr make_finite_graph(std::vector<PairedPoint> pts) {
    if (pts.empty()) throw std::invalid_argument("finite graph: no points");
    std::size_t n = pts[0].dim();
    for (const auto& p : pts)
        if (p.dim() != n) throw std::invalid_argument("finite graph: mixed dims");
    return std::make_shared<OperatorRep>(OperatorRep{FiniteGraph{std::move(pts)}, n});
}

inline OperatorPtr make_affine(Mat m, Vec q) {
    if (m.rows != m.cols || m.rows != q.size())
        throw std::invalid_argument("affine operator: shape mismatch");
    EigenSym e = eigen_symmetric(symmetric_part(m));
    if (!e.values.empty() && e.values.front() < -1e-9)
        throw std::invalid_argument("affine operator: symmetric part not PSD");
    std::size_t n = q.size();
    return std::make_shared<OperatorRep>(OperatorRep{AffineMonotone{std::move(m), std::move(q)}, n});
}

inline OperatorPtr make_skew(Mat b) {
    if (b.rows != b.cols) throw std::invalid_argument("skew operator: not square");
    for (std::size_t i = 0; i < b.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j)
            if (std::abs(b(i, j) + b(j, i)) > 1e-12)
                throw std::invalid_argument("skew operator: B + B' != 0");
    std::size_t n = b.rows;
    return std::make_shared<OperatorRep>(OperatorRep{SkewLinear{std::move(b)}, n});
}

inline OperatorPtr make_subdiff_pl(std::vector<Vec> slopes, Vec offsets) {
    if (slopes.empty() || slopes.size() != offsets.size())
        throw std::invalid_argument("subdiff-pl: piece mismatch");
    std::size_t n = slopes[0].size();
    for (const Vec& s : slopes)
        if (s.size() != n) throw std::invalid_argument("subdiff-pl: mixed dims");
    return std::make_shared<OperatorRep>(
        OperatorRep{SubdiffPL{std::move(slopes), std::move(offsets)}, n});
}

inline OperatorPtr make_normal_cone(HalfspaceList c, std::size_t n) {
    if (!halfspaces_nonempty(c, n))
        throw std::invalid_argument("normal cone: empty constraint set");
    return std::make_shared<OperatorRep>(OperatorRep{NormalConeOp{std::move(c), n}, n});
}

inline OperatorPtr make_sum(OperatorPtr a, OperatorPtr b) {
    if (a->dim != b->dim) throw std::invalid_argument("sum: dimension mismatch");
    std::size_t n = a->dim;
    return std::make_shared<OperatorRep>(OperatorRep{SumOp{std::move(a), std::move(b)}, n});
}

inline OperatorPtr make_precomp(LinearMapRep l, OperatorPtr inner) {
    if (l.codomain_dim() != inner->dim)
        throw std::invalid_argument("precomp: L codomain must match inner operator");
    std::size_t n = l.domain_dim();
    return std::make_shared<OperatorRep>(OperatorRep{PrecompOp{std::move(l), std::move(inner)}, n});
}

inline OperatorPtr make_product(OperatorPtr a, OperatorPtr b) {
    std::size_t n = a->dim + b->dim;
    return std::make_shared<OperatorRep>(OperatorRep{ProductOp{std::move(a), std::move(b)}, n});
}

// Discretization window over Z: lo/hi have length 2n (x part then x* part).
struct BoxProbe {
    Vec lo, hi;
    double resolution = 0.05;
    double tol = 1e-9;

    BoxProbe() = default;
    BoxProbe(Vec lo_, Vec hi_, double res, double t = 1e-9)
        : lo(std::move(lo_)), hi(std::move(hi_)), resolution(res), tol(t) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("BoxProbe: lo/hi mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw std::invalid_argument("BoxProbe: lo < hi required");
        if (!(resolution > 0.0)) throw std::invalid_argument("BoxProbe: resolution > 0");
    }

    static BoxProbe cube(std::size_t n, double radius, double res, double t = 1e-9) {
        return BoxProbe(Vec(2 * n, -radius), Vec(2 * n, radius), res, t);
    }

    std::size_t n() const { return lo.size() / 2; }

    std::vector<double> axis(std::size_t i) const {
        std::vector<double> v;
        std::size_t k = static_cast<std::size_t>((hi[i] - lo[i]) / resolution + 1e-9) + 1;
        v.reserve(k);
        for (std::size_t j = 0; j < k; ++j) v.push_back(lo[i] + resolution * static_cast<double>(j));
        return v;
    }
};

// Lexicographic walk over the grid of the axes [first, first+count).
inline void for_each_grid(const BoxProbe& probe, std::size_t first, std::size_t count,
                          const std::function<void(const Vec&)>& fn) {
    std::vector<std::vector<double>> axes;
    for (std::size_t i = 0; i < count; ++i) axes.push_back(probe.axis(first + i));
    Vec pt(count, 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
        if (d == count) {
            fn(pt);
            return;
        }
        for (double v : axes[d]) {
            pt[d] = v;
            rec(d + 1);
        }
    };
    rec(0);
}

// ---- evaluation --------------------------------------------------------

inline GenPolytope evaluate(const OperatorRep& op, const Vec& x);

namespace detail_ops {

inline GenPolytope eval_node(const FiniteGraph& g, const Vec& x, std::size_t) {
    GenPolytope val;
    for (const PairedPoint& p : g.points)
        if (norm_inf(sub(p.x, x)) <= 1e-12) val.vertices.push_back(p.xstar);
    if (val.vertices.empty()) return GenPolytope::make_empty();
    return val;
}

inline GenPolytope eval_node(const AffineMonotone& a, const Vec& x, std::size_t) {
    return GenPolytope::point(add(a.m.apply(x), a.q));
}

inline GenPolytope eval_node(const SkewLinear& s, const Vec& x, std::size_t) {
    return GenPolytope::point(s.b.apply(x));
}

inline GenPolytope eval_node(const SubdiffPL& f, const Vec& x, std::size_t) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.slopes.size(); ++i)
        best = std::max(best, dot(f.slopes[i], x) + f.offsets[i]);
    GenPolytope val;
    for (std::size_t i = 0; i < f.slopes.size(); ++i)
        if (dot(f.slopes[i], x) + f.offsets[i] >= best - 1e-9) val.vertices.push_back(f.slopes[i]);
    return val;
}

inline GenPolytope eval_node(const NormalConeOp& nc, const Vec& x, std::size_t) {
    if (!halfspaces_contain(nc.c, x, 1e-9)) return GenPolytope::make_empty();
    return normal_cone_at(nc.c, x, 1e-9);
}

inline GenPolytope eval_node(const SumOp& s, const Vec& x, std::size_t) {
    GenPolytope a = evaluate(*s.left, x);
    if (a.empty) return GenPolytope::make_empty();
    GenPolytope b = evaluate(*s.right, x);
    if (b.empty) return GenPolytope::make_empty();
    return prune_redundant_vertices(minkowski_sum(a, b));
}

inline GenPolytope eval_node(const PrecompOp& p, const Vec& x, std::size_t) {
    GenPolytope inner = evaluate(*p.inner, p.l.apply(x));
    if (inner.empty) return GenPolytope::make_empty();
    return linear_image(p.l.matrix.transposed(), inner);
}

inline GenPolytope eval_node(const ProductOp& pr, const Vec& x, std::size_t) {
    const std::size_t na = pr.left->dim, nb = pr.right->dim;
    Vec x1(x.begin(), x.begin() + static_cast<long>(na));
    Vec x2(x.begin() + static_cast<long>(na), x.end());
    GenPolytope a = evaluate(*pr.left, x1);
    if (a.empty) return GenPolytope::make_empty();
    GenPolytope b = evaluate(*pr.right, x2);
    if (b.empty) return GenPolytope::make_empty();
    auto pad_lo = [&](const Vec& v) {
        Vec w(na + nb, 0.0);
        std::copy(v.begin(), v.end(), w.begin());
        return w;
    };
    auto pad_hi = [&](const Vec& v) {
        Vec w(na + nb, 0.0);
        std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(na));
        return w;
    };
    GenPolytope r;
    for (const Vec& u : a.vertices)
        for (const Vec& v : b.vertices) {
            Vec w = pad_lo(u);
            std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(na));
            r.vertices.push_back(std::move(w));
        }
    for (const Vec& u : a.rays) r.rays.push_back(pad_lo(u));
    for (const Vec& v : b.rays) r.rays.push_back(pad_hi(v));
    return r;
}

}  // namespace detail_ops

inline GenPolytope evaluate(const OperatorRep& op, const Vec& x) {
    if (x.size() != op.dim) throw std::invalid_argument("evaluate: dimension mismatch");
    return std::visit([&](const auto& node) { return detail_ops::eval_node(node, x, op.dim); },
                      op.node);
}

// ---- domains -----------------------------------------------------------

// Halfspace description of D(op), when one exists in our catalog.
inline std::optional<HalfspaceList> domain_halfspaces(const OperatorRep& op) {
    using R = std::optional<HalfspaceList>;
    return std::visit(
        [&](const auto& node) -> R {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, FiniteGraph>) {
                std::vector<Vec> xs;
                for (const auto& p : node.points) {
                    bool seen = false;
                    for (const Vec& v : xs)
                        if (norm_inf(sub(v, p.x)) <= 1e-12) seen = true;
                    if (!seen) xs.push_back(p.x);
                }
                if (xs.size() != 1) return std::nullopt;
                HalfspaceList hs;
                for (std::size_t i = 0; i < xs[0].size(); ++i) {
                    hs.push_back({unit(xs[0].size(), i, 1.0), xs[0][i]});
                    hs.push_back({unit(xs[0].size(), i, -1.0), -xs[0][i]});
                }
                return hs;
            } else if constexpr (std::is_same_v<T, AffineMonotone> ||
                                 std::is_same_v<T, SkewLinear> ||
                                 std::is_same_v<T, SubdiffPL>) {
                return HalfspaceList{};  // all of R^n
            } else if constexpr (std::is_same_v<T, NormalConeOp>) {
                return node.c;
            } else if constexpr (std::is_same_v<T, SumOp>) {
                R a = domain_halfspaces(*node.left), b = domain_halfspaces(*node.right);
                if (!a || !b) return std::nullopt;
                HalfspaceList hs = *a;
                hs.insert(hs.end(), b->begin(), b->end());
                return hs;
            } else if constexpr (std::is_same_v<T, PrecompOp>) {
                R inner = domain_halfspaces(*node.inner);
                if (!inner) return std::nullopt;
                HalfspaceList hs;
                for (const Halfspace& h : *inner)
                    hs.push_back({node.l.matrix.apply_transposed(h.g), h.c});
                return hs;
            } else {  // ProductOp
                R a = domain_halfspaces(*node.left), b = domain_halfspaces(*node.right);
                if (!a || !b) return std::nullopt;
                const std::size_t na = node.left->dim, nb = node.right->dim;
                HalfspaceList hs;
                for (const Halfspace& h : *a) {
                    Vec g(na + nb, 0.0);
                    std::copy(h.g.begin(), h.g.end(), g.begin());
                    hs.push_back({std::move(g), h.c});
                }
                for (const Halfspace& h : *b) {
                    Vec g(na + nb, 0.0);
                    std::copy(h.g.begin(), h.g.end(), g.begin() + static_cast<long>(na));
                    hs.push_back({std::move(g), h.c});
                }
                return hs;
            }
        },
        op.node);
}

inline GenPolytope domain(const OperatorRep& op) {
    if (const FiniteGraph* g = std::get_if<FiniteGraph>(&op.node)) {
        GenPolytope d;
        for (const auto& p : g->points) {
            bool seen = false;
            for (const Vec& v : d.vertices)
                if (norm_inf(sub(v, p.x)) <= 1e-12) seen = true;
            if (!seen) d.vertices.push_back(p.x);
        }
        return d;
    }
    if (const SumOp* s = std::get_if<SumOp>(&op.node)) {
        const FiniteGraph* lg = std::get_if<FiniteGraph>(&s->left->node);
        const FiniteGraph* rg = std::get_if<FiniteGraph>(&s->right->node);
        if (lg || rg) {
            const OperatorRep& graph_side = lg ? *s->left : *s->right;
            const OperatorRep& other = lg ? *s->right : *s->left;
            GenPolytope pts = domain(graph_side);
            GenPolytope other_dom = domain(other);
            GenPolytope d;
            for (const Vec& v : pts.vertices)
                if (contains_point(other_dom, v)) d.vertices.push_back(v);
            if (d.vertices.empty()) return GenPolytope::make_empty();
            return d;
        }
    }
    if (const ProductOp* pr = std::get_if<ProductOp>(&op.node)) {
        // Cross product of the factor domains.
        GenPolytope da = domain(*pr->left), db = domain(*pr->right);
        if (da.empty || db.empty) return GenPolytope::make_empty();
        const std::size_t na = pr->left->dim, nb = pr->right->dim;
        GenPolytope d;
        for (const Vec& u : da.vertices)
            for (const Vec& v : db.vertices) {
                Vec w(na + nb, 0.0);
                std::copy(u.begin(), u.end(), w.begin());
                std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(na));
                d.vertices.push_back(std::move(w));
            }
        for (const Vec& u : da.rays) {
            Vec w(na + nb, 0.0);
            std::copy(u.begin(), u.end(), w.begin());
            d.rays.push_back(std::move(w));
        }
        for (const Vec& v : db.rays) {
            Vec w(na + nb, 0.0);
            std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(na));
            d.rays.push_back(std::move(w));
        }
        return d;
    }
    std::optional<HalfspaceList> hs = domain_halfspaces(op);
    if (hs) {
        if (hs->empty()) return GenPolytope::full_space(op.dim);
        return halfspaces_to_generators(*hs, op.dim);
    }
    if (const PrecompOp* p = std::get_if<PrecompOp>(&op.node)) {
        // Preimage of a finite-point domain: hull of the affine fibers.
        GenPolytope inner_dom = domain(*p->inner);
        GenPolytope d;
        std::vector<Vec> ns = null_space(p->l.matrix);
        for (const Vec& y : inner_dom.vertices) {
            LstsqResult ls = least_squares(p->l.matrix, y);
            if (ls.feasible) d.vertices.push_back(ls.x);
        }
        for (const Vec& b : ns) {
            d.rays.push_back(b);
            d.rays.push_back(scale(-1.0, b));
        }
        if (d.vertices.empty()) return GenPolytope::make_empty();
        return d;
    }
    throw std::logic_error("domain: unsupported representation");
}

// ---- finite-graph monotonicity ----------------------------------------

inline CheckReport is_monotone_finite(const FiniteGraph& g, double tol = 1e-9) {
    CheckReport r;
    r.what = "pairwise monotonicity";
    r.tol = tol;
    r.verdict = Verdict::Holds;
    r.worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.points.size(); ++i)
        for (std::size_t j = i + 1; j < g.points.size(); ++j) {
            double v = pairing_p(g.points[i] - g.points[j]);
            r.worst = std::min(r.worst, v);
            if (v < -tol && r.verdict == Verdict::Holds) {
                r.verdict = Verdict::Fails;
                r.witness = g.points[i] - g.points[j];
            }
        }
    if (g.points.size() < 2) r.worst = 0.0;
    return r;
}

// ---- discretization ----------------------------------------------------

inline FiniteGraph discretize_graph(const OperatorRep& op, const BoxProbe& probe) {
    const std::size_t n = op.dim;
    if (probe.n() != n) throw std::invalid_argument("discretize_graph: probe dim mismatch");
    FiniteGraph out;
    Vec xs_lo(probe.lo.begin() + static_cast<long>(n), probe.lo.end());
    Vec xs_hi(probe.hi.begin() + static_cast<long>(n), probe.hi.end());
    auto in_xstar_box = [&](const Vec& v) {
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] < xs_lo[i] - 1e-9 || v[i] > xs_hi[i] + 1e-9) return false;
        return true;
    };
    if (const FiniteGraph* g = std::get_if<FiniteGraph>(&op.node)) {
        for (const PairedPoint& p : g->points) {
            bool in = in_xstar_box(p.xstar);
            for (std::size_t i = 0; i < n && in; ++i)
                if (p.x[i] < probe.lo[i] - 1e-9 || p.x[i] > probe.hi[i] + 1e-9) in = false;
            if (in) out.points.push_back(p);
        }
        return out;
    }

    for_each_grid(probe, 0, n, [&](const Vec& x) {
        GenPolytope val = evaluate(op, x);
        if (val.empty) return;
        std::vector<Vec> local;  // duplicates only arise within one x slice
        auto push = [&](const Vec& v) {
            for (const Vec& w : local)
                if (norm_inf(sub(w, v)) <= 1e-12) return;
            local.push_back(v);
        };
        for (const Vec& v : val.vertices) {
            if (in_xstar_box(v)) push(v);
            // bounded faces: walk the segment between every vertex pair
            for (const Vec& w : val.vertices) {
                double len = norm2(sub(w, v));
                if (len <= probe.resolution) continue;
                for (double t = probe.resolution; t < len; t += probe.resolution) {
                    Vec pt = add(v, scale(t / len, sub(w, v)));
                    if (in_xstar_box(pt)) push(pt);
                }
            }
            for (const Vec& ray : val.rays) {
                Vec dir = scale(1.0 / std::max(norm2(ray), 1e-30), ray);
                for (std::size_t k = 1;; ++k) {
                    Vec pt = add(v, scale(probe.resolution * static_cast<double>(k), dir));
                    if (!in_xstar_box(pt)) break;
                    push(pt);
                }
            }
        }
        for (const Vec& v : local) out.points.emplace_back(x, v);
    });
    return out;
}

// ---- monotonically-related infimum ------------------------------------

// inf over the graph of p(z - a).  Exact for finite graphs and affine
// operators; a discretization upper bound otherwise.
inline ExtReal monotone_related_inf(const OperatorRep& op, const PairedPoint& z,
                                    const BoxProbe& probe) {
    if (z.dim() != op.dim) throw std::invalid_argument("monotone_related_inf: dim mismatch");
    if (const FiniteGraph* g = std::get_if<FiniteGraph>(&op.node)) {
        if (g->points.empty()) throw std::invalid_argument("monotone_related_inf: empty graph");
        double best = std::numeric_limits<double>::infinity();
        for (const PairedPoint& a : g->points) best = std::min(best, pairing_p(z - a));
        return ExtReal(best);
    }
    const AffineMonotone* aff = std::get_if<AffineMonotone>(&op.node);
    AffineMonotone tmp;
    if (const SkewLinear* sk = std::get_if<SkewLinear>(&op.node)) {
        tmp.m = sk->b;
        tmp.q = zeros(op.dim);
        aff = &tmp;
    }
    if (aff) {
        Mat s = symmetric_part(aff->m);
        Vec v = add(z.xstar, sub(aff->m.apply_transposed(z.x), aff->q));
        PinvResult pr = pseudo_inverse_apply(s, v);
        if (!pr.in_range) return ExtReal::neg_inf();
        double quad = 0.25 * dot(v, pr.w);
        return ExtReal(pairing_p(z) - dot(z.x, aff->q) - quad);
    }
    FiniteGraph g = discretize_graph(op, probe);
    if (g.points.empty()) throw std::invalid_argument("monotone_related_inf: empty discretization");
    double best = std::numeric_limits<double>::infinity();
    for (const PairedPoint& a : g.points) best = std::min(best, pairing_p(z - a));
    return ExtReal(best);
}

// ---- maximality probe --------------------------------------------------

// Refutation scan: any grid z farther than 10*resolution from the graph yet
// monotonically related to it witnesses non-maximality.  HOLDS is always
// at-resolution.
inline CheckReport maximality_probe(const OperatorRep& op, const BoxProbe& probe) {
    const std::size_t n = op.dim;
    CheckReport rep;
    rep.what = "maximality refutation scan";
    rep.tol = probe.tol;
    rep.resolution = probe.resolution;
    const double far = 10.0 * probe.resolution;
    const double far2 = far * far;

    const AffineMonotone* aff = std::get_if<AffineMonotone>(&op.node);
    AffineMonotone tmp;
    if (const SkewLinear* sk = std::get_if<SkewLinear>(&op.node)) {
        tmp.m = sk->b;
        tmp.q = zeros(n);
        aff = &tmp;
    }
    if (aff) {
        // Exact branch: closed-form infimum and closed-form graph distance.
        Mat s = symmetric_part(aff->m);
        EigenSym es = eigen_symmetric(s);
        double emax = 0.0;
        for (double ev : es.values) emax = std::max(emax, std::abs(ev));
        double cutoff = 1e-9 * std::max(emax, 1e-300);
        // distance: min_x |u - x|^2 + |u* - Mx - q|^2, normal matrix I + M'M
        Mat nm = Mat::identity(n);
        Mat mtm = aff->m.transposed().mul(aff->m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) nm(i, j) += mtm(i, j);
        bool found = false;
        PairedPoint witness;
        for_each_grid(probe, 0, 2 * n, [&](const Vec& zv) {
            if (found) return;
            PairedPoint z(Vec(zv.begin(), zv.begin() + static_cast<long>(n)),
                          Vec(zv.begin() + static_cast<long>(n), zv.end()));
            Vec v = add(z.xstar, sub(aff->m.apply_transposed(z.x), aff->q));
            double quad = 0.0;
            bool in_range = true;
            for (std::size_t j = 0; j < n; ++j) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += es.vectors(i, j) * v[i];
                if (std::abs(es.values[j]) > cutoff)
                    quad += proj * proj / es.values[j];
                else if (std::abs(proj) > 1e-8 * std::max(1.0, norm2(v)))
                    in_range = false;
            }
            if (!in_range) return;  // infimum is -inf, z not related
            double inf_val = pairing_p(z) - dot(z.x, aff->q) - 0.25 * quad;
            if (inf_val < -probe.tol) return;
            Vec rhs = add(z.x, aff->m.apply_transposed(sub(z.xstar, aff->q)));
            LstsqResult ls = least_squares(nm, rhs);
            Vec dx = sub(z.x, ls.x);
            Vec dxs = sub(z.xstar, add(aff->m.apply(ls.x), aff->q));
            double d2 = dot(dx, dx) + dot(dxs, dxs);
            if (d2 > far2) {
                found = true;
                witness = z;
            }
        });
        if (found) {
            rep.verdict = Verdict::Fails;
            rep.witness = witness;
        } else {
            rep.verdict = Verdict::HoldsAtResolution;
        }
        return rep;
    }

    // Generic branch over the discretized graph, bucketed by x-cell.  The
    // graph is sampled over a box enlarged by half the extent per axis so
    // that unbounded value directions (normal-cone rays) keep refuting
    // points near the scan boundary; the scan itself stays on the probe box.
    BoxProbe sample = probe;
    for (std::size_t i = 0; i < sample.lo.size(); ++i) {
        double extent = sample.hi[i] - sample.lo[i];
        double margin = std::ceil(0.5 * extent / sample.resolution) * sample.resolution;
        sample.lo[i] -= margin;
        sample.hi[i] += margin;
    }
    FiniteGraph graph = discretize_graph(op, sample);
    if (graph.points.empty()) {
        rep.verdict = Verdict::Error;
        rep.what += " (empty discretized graph)";
        return rep;
    }
    std::vector<std::vector<double>> xaxes;
    for (std::size_t i = 0; i < n; ++i) xaxes.push_back(probe.axis(i));
    auto cell_of = [&](const Vec& x) {
        std::vector<long> c(n);
        for (std::size_t i = 0; i < n; ++i)
            c[i] = std::lround((x[i] - probe.lo[i]) / probe.resolution);
        return c;
    };
    std::vector<std::vector<long>> pt_cell;
    pt_cell.reserve(graph.points.size());
    for (const PairedPoint& p : graph.points) pt_cell.push_back(cell_of(p.x));

    bool found = false;
    PairedPoint witness;
    const long near_r = 2;
    // Outer walk over the x part so candidate lists amortize over x* values.
    for_each_grid(probe, 0, n, [&](const Vec& u) {
        if (found) return;
        std::vector<long> uc = cell_of(u);
        std::vector<std::size_t> near;
        for (std::size_t k = 0; k < graph.points.size(); ++k) {
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(pt_cell[k][i] - uc[i]) > near_r) ok = false;
            if (ok) near.push_back(k);
        }
        std::vector<Vec> du;
        std::vector<double> du_dot_axstar, du_norm2;
        du.reserve(near.size());
        for (std::size_t k : near) {
            Vec d = sub(u, graph.points[k].x);
            du_dot_axstar.push_back(dot(d, graph.points[k].xstar));
            du_norm2.push_back(dot(d, d));
            du.push_back(std::move(d));
        }
        for_each_grid(probe, n, n, [&](const Vec& ustar) {
            if (found) return;
            // quick refutation against nearby graph points:
            // p(z-a) = <u - a.x, u*> - <u - a.x, a.x*>
            for (std::size_t k = 0; k < near.size(); ++k) {
                if (dot(du[k], ustar) - du_dot_axstar[k] < -probe.tol) return;
            }
            // close to a nearby graph point => cannot be a witness
            for (std::size_t k = 0; k < near.size(); ++k) {
                double d2 = du_norm2[k];
                for (std::size_t i = 0; i < n; ++i) {
                    double d = ustar[i] - graph.points[near[k]].xstar[i];
                    d2 += d * d;
                }
                if (d2 <= far2) return;
            }
            PairedPoint z(u, ustar);
            double inf_val = std::numeric_limits<double>::infinity();
            double d2 = std::numeric_limits<double>::infinity();
            for (const PairedPoint& a : graph.points) {
                inf_val = std::min(inf_val, pairing_p(z - a));
                d2 = std::min(d2, dist2(z, a));
                if (inf_val < -probe.tol) break;
            }
            if (inf_val >= -probe.tol && d2 > far2) {
                found = true;
                witness = z;
            }
        });
    });
    if (found) {
        rep.verdict = Verdict::Fails;
        rep.witness = witness;
    } else {
        rep.verdict = Verdict::HoldsAtResolution;
    }
    return rep;
}

}  // namespace monorep
