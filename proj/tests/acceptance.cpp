// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Usage: acceptance <source-dir> [<cli-binary>]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "monorep/calculus.hpp"
#include "monorep/oracle.hpp"
#include "monorep/qualification.hpp"
#include "monorep/representatives.hpp"
#include "monorep/specfile.hpp"

using namespace monorep;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, long budget_ms,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (ok && budget_ms > 0 && ms > budget_ms) {
        ok = false;
        detail = "runtime " + std::to_string(ms) + " ms exceeds budget " +
                 std::to_string(budget_ms) + " ms";
    }
    std::printf("criterion %2d: %s  %s (%ld ms)%s%s\n", number, ok ? "PASS" : "FAIL",
                name.c_str(), ms, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

PairedPoint random_point(std::mt19937& rng, std::size_t n, double lim = 3.0) {
    std::uniform_real_distribution<double> u(-lim, lim);
    Vec x(n), xs(n);
    for (auto& v : x) v = u(rng);
    for (auto& v : xs) v = u(rng);
    return {x, xs};
}

// Gradient of a random convex quadratic: monotone by construction.
std::vector<PairedPoint> random_monotone_graph(std::mt19937& rng, std::size_t n,
                                               std::size_t max_pts) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> cnt(2, max_pts);
    Mat g(n, n);
    for (double& v : g.a) v = u(rng);
    Mat s = g.transposed().mul(g);
    Vec q(n);
    for (auto& v : q) v = u(rng);
    std::size_t k = cnt(rng);
    std::vector<PairedPoint> pts;
    for (std::size_t i = 0; i < k; ++i) {
        Vec x(n);
        for (auto& v : x) v = u(rng);
        pts.push_back({x, add(s.apply(x), q)});
    }
    return pts;
}

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

Mat rotation_skew() {
    Mat b(2, 2);
    b(0, 1) = -1.0;
    b(1, 0) = 1.0;
    return b;
}

std::string strip_wall(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_ms") == std::string::npos) out << line << "\n";
    return out.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string src_dir = argc > 1 ? argv[1] : ".";
    const std::string cli_bin = argc > 2 ? argv[2] : "./monorep";

    // 1. algebraic identities of the pairing and dual product
    criterion(1, "pairing algebra on random data", 1000, [](std::string& detail) {
        std::mt19937 rng(170815);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::uniform_int_distribution<std::size_t> dims(1, 4);
        for (int it = 0; it < 1000; ++it) {
            std::size_t n = dims(rng);
            PairedPoint z = random_point(rng, n), z1 = random_point(rng, n),
                        z2 = random_point(rng, n);
            double lam = u(rng);
            if (!close_rel(dual_product(z, z), 2.0 * pairing_p(z), 1e-12)) {
                detail = "z.z != 2p(z)";
                return false;
            }
            PairedPoint lz{scale(lam, z.x), scale(lam, z.xstar)};
            if (!close_rel(pairing_p(lz), lam * lam * pairing_p(z), 1e-12)) {
                detail = "p(lz) != l^2 p(z)";
                return false;
            }
            if (!close_rel(pairing_p(z1 + z2),
                           pairing_p(z1) + pairing_p(z2) + dual_product(z1, z2), 1e-12)) {
                detail = "sum expansion";
                return false;
            }
            if (!close_rel(pairing_p(z1 - z2),
                           pairing_p(z1) + pairing_p(z2) - dual_product(z1, z2), 1e-12)) {
                detail = "difference expansion";
                return false;
            }
        }
        return true;
    });

    // shared random graphs for criteria 2 and 3
    std::vector<std::vector<PairedPoint>> graphs;
    {
        std::mt19937 rng(550210);
        std::uniform_int_distribution<std::size_t> dims(1, 3);
        for (int i = 0; i < 100; ++i) graphs.push_back(random_monotone_graph(rng, dims(rng), 8));
    }

    // 2. sup form of h equals p(z) - inf form
    criterion(2, "Fitzpatrick dual form equivalence", 5000, [&](std::string& detail) {
        std::mt19937 rng(61502);
        BoxProbe dummy = BoxProbe::cube(1, 1.0, 0.5);
        for (const auto& pts : graphs) {
            std::size_t n = pts[0].dim();
            OperatorPtr op = make_finite_graph(pts);
            for (int k = 0; k < 50; ++k) {
                PairedPoint z = random_point(rng, n);
                double sup_form = fitzpatrick_finite_value(pts, z).value;
                double inf = std::numeric_limits<double>::infinity();
                for (const PairedPoint& a : pts) inf = std::min(inf, pairing_p(z - a));
                if (!close_rel(sup_form, pairing_p(z) - inf, 1e-12)) {
                    detail = "direct forms disagree";
                    return false;
                }
                double alt = fitzpatrick_altform_value(*op, z, dummy).value;
                if (!close_rel(sup_form, alt, 1e-12)) {
                    detail = "library alt form disagrees";
                    return false;
                }
            }
        }
        return true;
    });

    // 3. basic representative inequalities on the same graphs
    criterion(3, "phi/h inequality suite", 0, [&](std::string& detail) {
        std::mt19937 rng(98112);
        for (const auto& pts : graphs) {
            std::size_t n = pts[0].dim();
            FiniteGraph g{pts};
            for (int k = 0; k < 10; ++k) {
                PairedPoint z = random_point(rng, n, 1.5);
                ExtReal phi = penot_value(g, z);
                double h = fitzpatrick_finite_value(pts, z).value;
                if (phi.finite()) {
                    if (phi.value < pairing_p(z) - 1e-9) {
                        detail = "phi < p";
                        return false;
                    }
                    if (h > phi.value + 1e-9) {
                        detail = "h > phi";
                        return false;
                    }
                }
            }
            for (const PairedPoint& a : pts) {
                if (std::abs(penot_value(g, a).value - pairing_p(a)) > 1e-9) {
                    detail = "phi != p at a graph point";
                    return false;
                }
                if (std::abs(fitzpatrick_finite_value(pts, a).value - pairing_p(a)) > 1e-9) {
                    detail = "h != p at a graph point";
                    return false;
                }
                PairedPoint z{a.x, random_point(rng, a.dim()).xstar};
                if (fitzpatrick_finite_value(pts, z).value < pairing_p(z) - 1e-9) {
                    detail = "h < p over the domain";
                    return false;
                }
            }
        }
        return true;
    });

    // 4. maximality certificates on the fixed catalog
    criterion(4, "maximality certificates", 10000, [](std::string& detail) {
        BoxProbe p1 = BoxProbe::cube(1, 2.0, 0.05);
        BoxProbe p2 = BoxProbe::cube(2, 2.0, 0.4);
        OperatorPtr id = make_affine(Mat::identity(1), {0.0});
        OperatorPtr absd = make_subdiff_pl({{1.0}, {-1.0}}, {0.0, 0.0});
        OperatorPtr nc = make_normal_cone(interval(0.0, 1.0), 1);
        Mat m2(2, 2);
        m2(0, 0) = 2.0;
        m2(0, 1) = m2(1, 0) = 1.0;
        m2(1, 1) = 2.0;
        OperatorPtr aff2 = make_affine(m2, {0.1, -0.2});
        std::vector<std::tuple<OperatorPtr, BoxProbe, const char*>> good = {
            {id, p1, "identity"},
            {absd, p1, "subdifferential"},
            {nc, p1, "normal cone"},
            {aff2, p2, "2-D affine"},
        };
        for (const auto& [op, probe, label] : good) {
            if (!maximality_certificate(*op, probe).passed()) {
                detail = std::string(label) + " not certified";
                return false;
            }
        }
        for (const OperatorPtr& bad :
             {make_finite_graph({{{0.0}, {0.0}}, {{1.0}, {1.0}}}),
              make_finite_graph({{{0.0}, {0.0}}})}) {
            CheckReport r1 = maximality_certificate(*bad, p1);
            CheckReport r2 = maximality_certificate(*bad, p1);
            if (r1.verdict != Verdict::Fails || !r1.witness) {
                detail = "expected a failing certificate with witness";
                return false;
            }
            if (!r2.witness || r1.witness->x != r2.witness->x ||
                r1.witness->xstar != r2.witness->xstar) {
                detail = "witness not reproducible";
                return false;
            }
        }
        return true;
    });

    // 5. extension restores the punctured sampled identity exactly
    criterion(5, "unique extension of the punctured identity", 0, [](std::string& detail) {
        BoxProbe probe = BoxProbe::cube(1, 1.0, 0.05);
        FiniteGraph punctured;
        std::vector<double> grid;
        for (int k = -20; k <= 20; ++k) grid.push_back(k * 0.05);
        for (double t : grid)
            if (std::abs(t) > 1e-12) punctured.points.push_back({{t}, {t}});
        FiniteGraph ext = extension_from_fitzpatrick(punctured, probe);
        // the punctured diagonal, including (0, 0), comes back in full
        for (double t : grid) {
            bool hit = false;
            for (const PairedPoint& p : ext.points)
                if (std::abs(p.x[0] - t) < 1e-9 && std::abs(p.xstar[0] - t) < 1e-9) hit = true;
            if (!hit) {
                detail = "grid trace point missing";
                return false;
            }
        }
        // no spurious points beyond the sampling ambiguity of the grid
        for (const PairedPoint& p : ext.points)
            if (std::abs(p.x[0] - p.xstar[0]) > 2.0 * probe.resolution + 1e-9) {
                detail = "spurious extension point off the diagonal";
                return false;
            }
        return true;
    });

    // 6. skew shift identity, infimal convolution, and maximality of A + B
    criterion(6, "skew translation suite", 30000, [](std::string& detail) {
        Mat b = rotation_skew();
        OperatorPtr id2 = make_affine(Mat::identity(2), zeros(2));
        OperatorPtr abs2 = make_subdiff_pl({{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}},
                                           {0.0, 0.0, 0.0, 0.0});
        BoxProbe coarse = BoxProbe::cube(2, 2.0, 0.4);
        BoxProbe fine = BoxProbe::cube(2, 2.0, 0.05);
        for (const OperatorPtr& a : {id2, abs2}) {
            CheckReport shift = skew_shift_identity_check(a, b, coarse);
            if (shift.verdict != Verdict::HoldsAtResolution) {
                detail = "shift identity not confirmed";
                return false;
            }
            RepFunction h1 = a == id2
                                 ? rep_fitz_affine(Mat::identity(2), zeros(2))
                                 : rep_fitz_finite(discretize_graph(*a, coarse).points);
            RepFunction h2 = rep_fitz_affine(b, zeros(2));
            bool ok = true;
            for_each_grid(coarse, 0, 4, [&](const Vec& zv) {
                if (!ok) return;
                Vec x(zv.begin(), zv.begin() + 2), xs(zv.begin() + 2, zv.end());
                ExtReal lhs = infconv2_value(h1, h2, x, xs);
                ExtReal rhs = evaluate_rep(h1, PairedPoint(x, sub(xs, b.apply(x))));
                if (lhs.finite() != rhs.finite() ||
                    (lhs.finite() && std::abs(lhs.value - rhs.value) > 1e-12))
                    ok = false;
            });
            if (!ok) {
                detail = "infconv2 does not reproduce the shift";
                return false;
            }
            CheckReport probe = maximality_probe(*make_sum(a, make_skew(b)), fine);
            if (probe.verdict != Verdict::HoldsAtResolution) {
                detail = "maximality probe found a witness for A + B";
                return false;
            }
        }
        return true;
    });

    // 7. chain representative trace through the diagonal
    criterion(7, "chain representative trace", 0, [](std::string& detail) {
        LinearMapRep l = diagonal_map(1);
        FiniteGraph m;
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                Vec v{i * 0.1, j * 0.1};
                m.points.push_back({v, v});
            }
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                double x = i * 0.1, xs = j * 0.1;
                LPStatus st = LPStatus::Optimal;
                ExtReal r = chain_representative_value(l, m, {x}, {xs}, &st);
                if (st == LPStatus::Unbounded) {
                    detail = "LP unbounded";
                    return false;
                }
                bool on_trace = std::abs(xs - 2.0 * x) < 1e-9;
                bool matches = r.finite() && std::abs(r.value - x * xs) <= 1e-9;
                if (matches != on_trace) {
                    detail = "trace mismatch at x=" + std::to_string(x) +
                             " xs=" + std::to_string(xs);
                    return false;
                }
            }
        return true;
    });

    // 8. convex-graph chain identity on three affine instances
    criterion(8, "convex-graph chain identity", 0, [](std::string& detail) {
        BoxProbe probe = BoxProbe::cube(1, 1.0, 0.25);
        if (convex_graph_chain_check(diagonal_map(1), Mat::identity(2), zeros(2), probe)
                .verdict != Verdict::HoldsAtResolution) {
            detail = "diagonal instance";
            return false;
        }
        Mat l(2, 1);
        l(0, 0) = 0.7;
        l(1, 0) = -0.4;
        Mat m(2, 2);
        m(0, 0) = 1.2;
        m(0, 1) = 0.5;
        m(1, 0) = 0.1;
        m(1, 1) = 0.9;
        if (convex_graph_chain_check(LinearMapRep{l}, m, {0.2, -0.1}, probe).verdict !=
            Verdict::HoldsAtResolution) {
            detail = "random PSD instance";
            return false;
        }
        if (convex_graph_chain_check(LinearMapRep{Mat(1, 1)}, Mat::identity(1), {0.5}, probe)
                .verdict != Verdict::HoldsAtResolution) {
            detail = "degenerate L = 0 instance";
            return false;
        }
        return true;
    });

    // 9. difference-map equivalence on random polytope pairs
    criterion(9, "difference map equivalence", 0, [](std::string& detail) {
        std::mt19937 rng(77031);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::uniform_int_distribution<std::size_t> cnt(3, 5);
        for (int it = 0; it < 100; ++it) {
            GenPolytope pu, pv;
            for (std::size_t i = 0; i < cnt(rng); ++i) pu.vertices.push_back({u(rng), u(rng)});
            for (std::size_t i = 0; i < cnt(rng); ++i) pv.vertices.push_back({u(rng), u(rng)});
            if (difference_map_equivalence(convex_set(pu), convex_set(pv)).verdict !=
                Verdict::Holds) {
                detail = "verdicts diverge on a random pair";
                return false;
            }
        }
        ConvexSetRep q1 = convex_set(halfspaces_to_generators(box({0.0, 0.0}, {1.0, 1.0}), 2));
        ConvexSetRep q2 = convex_set(halfspaces_to_generators(box({1.0, 1.0}, {2.0, 2.0}), 2));
        if (relint_contains_zero(minkowski_diff(q1, q2))) {
            detail = "boundary case should not contain zero in the relint";
            return false;
        }
        if (difference_map_equivalence(q1, q2).verdict != Verdict::Holds) {
            detail = "verdicts diverge on the boundary case";
            return false;
        }
        return true;
    });

    // 10. qualification implies a clean maximality probe of the composite
    criterion(10, "qualification/conclusion coupling", 0, [](std::string& detail) {
        BoxProbe probe1 = BoxProbe::cube(1, 1.5, 0.05);
        BoxProbe probe2 = BoxProbe::cube(2, 1.0, 0.2);
        OperatorPtr id1 = make_affine(Mat::identity(1), {0.0});
        OperatorPtr id2 = make_affine(Mat::identity(2), zeros(2));
        OperatorPtr absd = make_subdiff_pl({{1.0}, {-1.0}}, {0.0, 0.0});
        Mat m2(2, 2);
        m2(0, 0) = 2.0;
        m2(0, 1) = m2(1, 0) = 1.0;
        m2(1, 1) = 2.0;

        struct SumCase {
            OperatorPtr a, b;
            BoxProbe probe;
        };
        std::vector<SumCase> sums = {
            {make_normal_cone(interval(0.0, 1.0), 1), make_normal_cone(interval(0.5, 2.0), 1),
             probe1},
            {make_normal_cone(interval(0.0, 1.0), 1), id1, probe1},
            {absd, id1, probe1},
            {absd, make_normal_cone(interval(-1.0, 1.0), 1), probe1},
            {id1, id1, probe1},
            {make_normal_cone(interval(0.0, 1.0), 1),
             make_normal_cone(interval(0.25, 0.75), 1), probe1},
            {make_affine(m2, {0.1, -0.2}), make_skew(rotation_skew()), probe2},
            {make_normal_cone(box({0.0, 0.0}, {1.0, 1.0}), 2), id2, probe2},
        };
        int idx = 0;
        for (const SumCase& c : sums) {
            ++idx;
            if (qualification_sum(*c.a, *c.b).verdict != Verdict::Holds) {
                detail = "sum qualification " + std::to_string(idx) + " does not hold";
                return false;
            }
            if (maximality_probe(*make_sum(c.a, c.b), c.probe).verdict !=
                Verdict::HoldsAtResolution) {
                detail = "sum probe " + std::to_string(idx) + " found a witness";
                return false;
            }
        }

        struct ChainCase {
            LinearMapRep l;
            OperatorPtr m;
            BoxProbe probe;
        };
        Mat l12(2, 1);
        l12(0, 0) = 1.0;
        l12(1, 0) = 2.0;
        std::vector<ChainCase> chains = {
            {diagonal_map(1), make_normal_cone(box({0.0, 0.0}, {1.0, 1.0}), 2), probe1},
            {diagonal_map(1), id2, probe1},
            {LinearMapRep{l12}, make_normal_cone(box({0.0, 0.0}, {2.0, 4.0}), 2), probe1},
            {LinearMapRep{Mat::identity(1)}, absd, probe1},
        };
        idx = 0;
        for (const ChainCase& c : chains) {
            ++idx;
            if (qualification_chain(c.l, *c.m).verdict != Verdict::Holds) {
                detail = "chain qualification " + std::to_string(idx) + " does not hold";
                return false;
            }
            if (maximality_probe(*make_precomp(c.l, c.m), c.probe).verdict !=
                Verdict::HoldsAtResolution) {
                detail = "chain probe " + std::to_string(idx) + " found a witness";
                return false;
            }
        }

        // touching intervals: qualification fails, yet the probe of the sum
        // (the normal cone of the single shared point) stays clean
        OperatorPtr ta = make_normal_cone(interval(0.0, 1.0), 1);
        OperatorPtr tb = make_normal_cone(interval(1.0, 2.0), 1);
        if (qualification_sum(*ta, *tb).verdict != Verdict::Fails) {
            detail = "touching-interval qualification should fail";
            return false;
        }
        CheckReport touch = maximality_probe(*make_sum(ta, tb), probe1);
        if (touch.verdict == Verdict::Error) {
            detail = "touching-interval probe errored";
            return false;
        }
        return true;
    });

    // 11. brute-force oracles agree with the LP/closed-form paths
    criterion(11, "oracle agreement", 0, [](std::string& detail) {
        std::mt19937 rng(45810);
        std::uniform_int_distribution<int> coord(-4, 4);
        std::uniform_int_distribution<std::size_t> cnt(2, 3), weight(0, 16);
        BoxProbe probe({-1.0, -1.0}, {1.0, 1.0}, 0.25);
        for (int it = 0; it < 50; ++it) {
            std::size_t k = cnt(rng);
            std::vector<PairedPoint> pts;
            std::vector<double> vals;
            double vmin = 1e300, vmax = -1e300;
            // draw affinely independent points so the barycentric
            // representation of z is unique
            while (true) {
                std::vector<double> xs, vs;
                for (std::size_t i = 0; i < k; ++i) {
                    xs.push_back(coord(rng) * 0.25);
                    vs.push_back(coord(rng) * 0.25);
                }
                std::sort(xs.begin(), xs.end());
                std::sort(vs.begin(), vs.end());
                if (k == 2 && xs[0] == xs[1] && vs[0] == vs[1]) continue;
                if (k == 3) {
                    double area = (xs[1] - xs[0]) * (vs[2] - vs[0]) -
                                  (xs[2] - xs[0]) * (vs[1] - vs[0]);
                    if (std::abs(area) < 1e-9) continue;
                }
                pts.clear();
                vals.clear();
                vmin = 1e300;
                vmax = -1e300;
                for (std::size_t i = 0; i < k; ++i) {
                    pts.push_back({{xs[i]}, {vs[i]}});
                    vals.push_back(pairing_p(pts.back()));
                    vmin = std::min(vmin, vals.back());
                    vmax = std::max(vmax, vals.back());
                }
                break;
            }
            // probe z: an exact denominator-16 combination of the points
            std::vector<std::size_t> w(k, 0);
            for (int j = 0; j < 16; ++j) ++w[weight(rng) % k];
            PairedPoint z{{0.0}, {0.0}};
            for (std::size_t i = 0; i < k; ++i) {
                z.x[0] += w[i] / 16.0 * pts[i].x[0];
                z.xstar[0] += w[i] / 16.0 * pts[i].xstar[0];
            }
            double exact = penot_value(FiniteGraph{pts}, z).value;
            double approx = simplex_grid_convexhull_value(pts, vals, z, 16);
            double tol = (vmax - vmin + 1e-9) / 16.0 + 1e-9;
            if (!(std::isfinite(approx)) || std::abs(approx - exact) > tol) {
                detail = "simplex grid oracle deviates from the LP";
                return false;
            }
            // grid sup over graph points equals the max-affine form exactly
            PairedPoint zq = z;
            double grid_sup = grid_extremum(
                [&](const Vec& a) {
                    for (const PairedPoint& p : pts)
                        if (std::abs(p.x[0] - a[0]) < 1e-12 &&
                            std::abs(p.xstar[0] - a[1]) < 1e-12)
                            return dual_product(zq, p) - pairing_p(p);
                    return -1e300;
                },
                probe, ExtremumMode::Sup);
            if (grid_sup != fitzpatrick_finite_value(pts, zq).value) {
                detail = "grid extremum deviates from the sup form";
                return false;
            }
        }
        return true;
    });

    // 12. CLI determinism on the shipped batch spec
    criterion(12, "CLI determinism", 0, [&](std::string& detail) {
        fs::path spec = fs::path(src_dir) / "suites" / "full-suite.spec";
        if (!fs::exists(spec)) {
            detail = "missing " + spec.string();
            return false;
        }
        fs::path d1 = fs::temp_directory_path() / "monorep_accept_run1";
        fs::path d2 = fs::temp_directory_path() / "monorep_accept_run2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        fs::create_directories(d1);
        fs::create_directories(d2);
        for (const fs::path& d : {d1, d2}) {
            std::string cmd = "\"" + cli_bin + "\" run \"" + spec.string() + "\" --out \"" +
                              d.string() + "\"";
            int rc = std::system(cmd.c_str());
            if (rc != 0) {
                detail = "CLI exit status " + std::to_string(rc);
                return false;
            }
        }
        std::string r1 = slurp(d1 / "report.txt"), r2 = slurp(d2 / "report.txt");
        if (r1.empty() || strip_wall(r1) != strip_wall(r2)) {
            detail = "reports differ between runs";
            return false;
        }
        return true;
    });

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
