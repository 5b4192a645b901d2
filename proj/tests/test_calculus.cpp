#include <catch2/catch_amalgamated.hpp>

#include "monorep/calculus.hpp"
#include "monorep/oracle.hpp"

using namespace monorep;

namespace {

Mat rotation_skew() {
    Mat b(2, 2);
    b(0, 1) = -1.0;
    b(1, 0) = 1.0;
    return b;
}

}  // namespace

TEST_CASE("diagonal map and its adjoint") {
    LinearMapRep l = diagonal_map(2);
    CHECK(l.domain_dim() == 2);
    CHECK(l.codomain_dim() == 4);
    Vec lx = l.apply({1.0, 2.0});
    CHECK(lx == Vec{1.0, 2.0, 1.0, 2.0});
    Vec ad = l.apply_adjoint({1.0, 0.0, 2.0, 5.0});
    CHECK(ad == Vec{3.0, 5.0});
}

TEST_CASE("chain representative through the diagonal map") {
    // M: the identity sampled at the two diagonal corners of the square.
    FiniteGraph m{{{{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 1.0}, {1.0, 1.0}}}};
    LinearMapRep l = diagonal_map(1);

    LPStatus st;
    ExtReal r = chain_representative_value(l, m, {1.0}, {2.0}, &st);
    REQUIRE(st == LPStatus::Optimal);
    CHECK_THAT(r.value, Catch::Matchers::WithinAbs(2.0, 1e-9));

    // the fiber L* y* = 3 misses the graph over Lx = (1, 1)
    CHECK(chain_representative_value(l, m, {1.0}, {3.0}).is_pos_inf());

    ExtReal mid = chain_representative_value(l, m, {0.5}, {1.0});
    REQUIRE(mid.finite());
    CHECK_THAT(mid.value, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("chain representative with the identity map reduces to phi") {
    FiniteGraph m{{{{0.0}, {0.0}}, {{1.0}, {1.0}}, {{2.0}, {1.5}}}};
    LinearMapRep l{Mat::identity(1)};
    for (const PairedPoint& z :
         {PairedPoint{{0.5}, {0.5}}, PairedPoint{{1.5}, {1.25}}, PairedPoint{{1.0}, {1.0}}}) {
        ExtReal r = chain_representative_value(l, m, z.x, z.xstar);
        ExtReal phi = penot_value(m, z);
        CHECK(r.finite() == phi.finite());
        if (r.finite()) CHECK_THAT(r.value, Catch::Matchers::WithinAbs(phi.value, 1e-9));
    }
    CHECK(chain_representative_value(l, m, {3.0}, {0.0}).is_pos_inf());
}

TEST_CASE("chain representative dominates the pairing on a grid") {
    FiniteGraph m{{{{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 1.0}, {1.0, 1.0}}}};
    LinearMapRep l = diagonal_map(1);
    BoxProbe probe = BoxProbe::cube(1, 1.5, 0.25);
    for_each_grid(probe, 0, 2, [&](const Vec& zv) {
        ExtReal r = chain_representative_value(l, m, {zv[0]}, {zv[1]});
        if (r.finite()) CHECK(r.value >= zv[0] * zv[1] - 1e-9);
    });
}

TEST_CASE("sum of two graphs agrees with the diagonal chain construction") {
    FiniteGraph prod{{{{0.0, 0.0}, {0.0, 0.0}},
                      {{0.0, 1.0}, {0.0, 1.0}},
                      {{1.0, 0.0}, {1.0, 0.0}},
                      {{1.0, 1.0}, {1.0, 1.0}}}};
    FiniteGraph sum{{{{0.0}, {0.0}}, {{1.0}, {2.0}}}};  // graph of A + A
    LinearMapRep l = diagonal_map(1);
    for (const PairedPoint& z :
         {PairedPoint{{0.5}, {1.0}}, PairedPoint{{1.0}, {2.0}}, PairedPoint{{0.25}, {0.5}}}) {
        ExtReal r = chain_representative_value(l, prod, z.x, z.xstar);
        ExtReal phi = penot_value(sum, z);
        CHECK(r.finite() == phi.finite());
        if (r.finite()) CHECK_THAT(r.value, Catch::Matchers::WithinAbs(phi.value, 1e-9));
    }
}

TEST_CASE("infconv2 against an indicator-type closed form") {
    RepFunction h1 = rep_fitz_affine(Mat::identity(1), {0.0});
    RepFunction zero_graph = rep_fitz_affine(Mat(1, 1), {0.0});  // indicator of x* = 0
    ExtReal v = infconv2_value(h1, zero_graph, {1.0}, {1.0});
    REQUIRE(v.finite());
    CHECK_THAT(v.value, Catch::Matchers::WithinAbs(1.0, 1e-9));  // h1(1, 1) = 1

    // symmetric argument order takes the same substitution path
    ExtReal w = infconv2_value(zero_graph, h1, {1.0}, {1.0});
    REQUIRE(w.finite());
    CHECK_THAT(w.value, Catch::Matchers::WithinAbs(v.value, 1e-9));
}

TEST_CASE("infconv2 of two finite-graph forms via the epigraph LP") {
    RepFunction h1 = rep_fitz_finite({{{0.0}, {0.0}}, {{1.0}, {1.0}}});
    RepFunction h2 = rep_fitz_finite({{{0.0}, {0.0}}});  // constant zero
    ExtReal v = infconv2_value(h1, h2, {1.0}, {1.0});
    REQUIRE(v.finite());
    CHECK_THAT(v.value, Catch::Matchers::WithinAbs(0.0, 1e-9));

    // grid oracle: inf over a y* grid of h1(x, y*) + h2(x, x* - y*)
    Vec x{0.5}, xstar{0.7};
    double oracle = 1e300;
    for (double y = -4.0; y <= 4.0 + 1e-9; y += 0.01) {
        ExtReal a = evaluate_rep(h1, {{x[0]}, {y}});
        ExtReal b = evaluate_rep(h2, {{x[0]}, {xstar[0] - y}});
        if (a.finite() && b.finite()) oracle = std::min(oracle, a.value + b.value);
    }
    ExtReal got = infconv2_value(h1, h2, x, xstar);
    REQUIRE(got.finite());
    CHECK_THAT(got.value, Catch::Matchers::WithinAbs(oracle, 1e-3));
}

TEST_CASE("infconv2 of two quadratic closed forms") {
    RepFunction id = rep_fitz_affine(Mat::identity(1), {0.0});
    // identity box identity: inf_y (x+y)^2/4 + (x+x*-y)^2/4 = (x + x*/2)^2 / 2,
    // which equals the closed form for 2x.
    ExtReal v = infconv2_value(id, id, {1.0}, {1.0});
    REQUIRE(v.finite());
    CHECK_THAT(v.value, Catch::Matchers::WithinAbs(1.125, 1e-9));
    RepFunction twice = rep_fitz_affine([] {
        Mat m = Mat::identity(1);
        m(0, 0) = 2.0;
        return m;
    }(), {0.0});
    for (double x : {-1.0, 0.0, 0.5, 2.0})
        for (double xs : {-2.0, 0.0, 1.0}) {
            ExtReal lhs = infconv2_value(id, id, {x}, {xs});
            ExtReal rhs = evaluate_rep(twice, {{x}, {xs}});
            REQUIRE(lhs.finite());
            REQUIRE(rhs.finite());
            CHECK_THAT(lhs.value, Catch::Matchers::WithinAbs(rhs.value, 1e-9));
        }
}

TEST_CASE("infconv2 unwraps skew shifts") {
    RepFunction id = rep_fitz_affine(Mat::identity(1), {0.0});
    RepFunction shifted = rep_shifted(id, Mat(1, 1));  // 1-D skew is zero
    RepFunction zero_graph = rep_fitz_affine(Mat(1, 1), {0.0});
    ExtReal a = infconv2_value(shifted, zero_graph, {1.0}, {1.0});
    ExtReal b = infconv2_value(id, zero_graph, {1.0}, {1.0});
    REQUIRE(a.finite());
    CHECK(a.value == b.value);
}

TEST_CASE("skew shift identity for an affine operator") {
    OperatorPtr a = make_affine(Mat::identity(2), zeros(2));
    Mat b = rotation_skew();
    BoxProbe probe = BoxProbe::cube(2, 1.0, 0.5);
    CheckReport r = skew_shift_identity_check(a, b, probe);
    CHECK(r.verdict == Verdict::HoldsAtResolution);

    // spot value: h_{A+B} at ((1,0),(0,0)) is 1/4 |v|^2 with v = (1,-1)
    OperatorPtr s = make_sum(a, make_skew(b));
    ExtReal h = fitzpatrick_value(*s, {{1.0, 0.0}, {0.0, 0.0}}, probe);
    REQUIRE(h.finite());
    CHECK_THAT(h.value, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("skew shift identity with B = 0 is trivial") {
    OperatorPtr a = make_subdiff_pl({{1.0}, {-1.0}}, {0.0, 0.0});
    CheckReport r = skew_shift_identity_check(a, Mat(1, 1), BoxProbe::cube(1, 1.0, 0.25));
    CHECK(r.verdict == Verdict::HoldsAtResolution);
    CHECK(r.worst <= 1e-12);
}

TEST_CASE("skew shift identity on a discretized subdifferential") {
    // d(|t1| + |t2|) against the rotation skew, sampled path
    OperatorPtr a = make_subdiff_pl({{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}},
                                    {0.0, 0.0, 0.0, 0.0});
    CheckReport r = skew_shift_identity_check(a, rotation_skew(), BoxProbe::cube(2, 1.0, 0.5));
    CHECK(r.verdict == Verdict::HoldsAtResolution);
}

TEST_CASE("skew shift identity rejects a non-skew B") {
    Mat notskew(1, 1);
    notskew(0, 0) = 1.0;
    OperatorPtr a = make_affine(Mat::identity(1), {0.0});
    CHECK_THROWS(skew_shift_identity_check(a, notskew, BoxProbe::cube(1, 1.0, 0.5)));
}

TEST_CASE("convex-graph chain identity through the diagonal") {
    LinearMapRep l = diagonal_map(1);
    CheckReport r = convex_graph_chain_check(l, Mat::identity(2), zeros(2),
                                             BoxProbe::cube(1, 1.0, 0.25));
    CHECK(r.verdict == Verdict::HoldsAtResolution);
}

TEST_CASE("convex-graph chain identity with identity and zero maps") {
    LinearMapRep id2{Mat::identity(2)};
    CheckReport r1 = convex_graph_chain_check(id2, Mat::identity(2), {1.0, 0.0},
                                              BoxProbe::cube(2, 1.0, 0.5));
    CHECK(r1.verdict == Verdict::HoldsAtResolution);

    LinearMapRep zmap{Mat(1, 1)};  // L = 0
    CheckReport r2 = convex_graph_chain_check(zmap, Mat::identity(1), {1.0},
                                              BoxProbe::cube(1, 1.0, 0.25));
    CHECK(r2.verdict == Verdict::HoldsAtResolution);
}

TEST_CASE("operator composition wrappers") {
    OperatorPtr a = make_affine(Mat::identity(1), {0.0});
    OperatorPtr s = sum_operator(a, a);
    GenPolytope v = evaluate(*s, {2.0});
    REQUIRE(v.vertices.size() == 1);
    CHECK_THAT(v.vertices[0][0], Catch::Matchers::WithinAbs(4.0, 1e-12));

    OperatorPtr pr = product_operator(a, a);
    CHECK(pr->dim == 2);

    OperatorPtr t = precompose(diagonal_map(1), make_affine(Mat::identity(2), zeros(2)));
    GenPolytope tv = evaluate(*t, {1.0});  // L*(Lx) = 2x
    REQUIRE(tv.vertices.size() == 1);
    CHECK_THAT(tv.vertices[0][0], Catch::Matchers::WithinAbs(2.0, 1e-12));
}
