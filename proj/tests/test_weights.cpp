#include "doctest.h"

#include "bow/weights.hpp"

#include <numeric>
#include <random>

using namespace bow;

TEST_CASE("weights_from_gauge finite example") {
    GaugeData g{DiagramKind::Finite, {1, 1}, {2, 1}};
    auto [lambda, mu] = weights_from_gauge(g);
    CHECK(lambda.vec == std::vector<i64>{3, 1, 0});
    CHECK(mu.vec == std::vector<i64>{2, 1, 1});
    CHECK(lambda.charge() == mu.charge());
    CHECK(gauge_from_weights(lambda, mu, DiagramKind::Finite) == g);
}

TEST_CASE("weights_from_gauge affine example") {
    GaugeData g{DiagramKind::Affine, {1, 1}, {1, 1}};
    auto [lambda, mu] = weights_from_gauge(g);
    CHECK(lambda.vec == std::vector<i64>{1, 0});
    CHECK(lambda.d_deg == 1);
    CHECK(mu.vec == std::vector<i64>{1, 0});
    CHECK(mu.d_deg == 0);
    CHECK(gauge_from_weights(lambda, mu, DiagramKind::Affine) == g);

    GaugeData z{DiagramKind::Affine, {0, 0}, {0, 0}};
    auto [lz, mz] = weights_from_gauge(z);
    CHECK(lz.vec == std::vector<i64>{0, 0});
    CHECK(mz.vec == std::vector<i64>{0, 0});
}

TEST_CASE("gauge_from_weights errors and trivial cases") {
    AffineWeight l{{1, 1}, 0, 2}, m{{2, 0}, 0, 2};
    // mu above lambda: partial sums give v_1 = -1
    CHECK_THROWS_AS(gauge_from_weights(l, m, DiagramKind::Finite), Error);
    // (lambda, lambda) forces v = 0
    AffineWeight l2{{2, 0}, 0, 2};
    GaugeData g = gauge_from_weights(l2, l2, DiagramKind::Finite);
    CHECK(g.v == std::vector<i64>{0});
    CHECK(g.w == std::vector<i64>{2});
}

TEST_CASE("dominance order") {
    AffineWeight a{{1, 1}, 0, 2}, b{{2, 0}, 0, 2};
    CHECK(dominance_leq(a, b));
    CHECK(!dominance_leq(b, a));
    CHECK(dominance_leq(b, b));
    AffineWeight c{{1, 0}, 0, 2}, d{{1, 0}, 1, 2};
    CHECK(dominance_leq(c, d)); // difference is delta
    CHECK(!dominance_leq(d, c));
}

TEST_CASE("transpose: worked example and classical case") {
    GenYoungDiagram g{{2, -1}, 3};
    GenYoungDiagram t = transpose_gyd(g);
    CHECK(t.entries == std::vector<i64>{1, 1, -1});
    CHECK(t.level == 2);

    GenYoungDiagram p{{3, 1}, 3};
    CHECK(transpose_gyd(p).entries == std::vector<i64>{2, 1, 1});

    GenYoungDiagram z{{0, 0}, 3};
    CHECK(transpose_gyd(z).entries == std::vector<i64>{0, 0, 0});

    CHECK_THROWS_AS(transpose_gyd(GenYoungDiagram{{1}, 0}), Error);
}

TEST_CASE("transpose preserves charge and double transpose is the identity") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<i64> un(1, 5), ul(1, 5), step(0, 3), base(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        i64 n = un(rng), l = ul(rng);
        GenYoungDiagram g;
        g.level = l;
        i64 top = base(rng);
        g.entries.push_back(top);
        for (i64 i = 1; i < n; ++i) g.entries.push_back(g.entries.back() - step(rng));
        if (g.entries.front() - g.entries.back() > l) { --trial; continue; }
        GenYoungDiagram t = transpose_gyd(g);
        i64 cg = std::accumulate(g.entries.begin(), g.entries.end(), i64(0));
        i64 ct = std::accumulate(t.entries.begin(), t.entries.end(), i64(0));
        CHECK(cg == ct);
        CHECK(transpose_gyd(t) == g);
    }
}

TEST_CASE("mirror gauge examples") {
    GaugeData g{DiagramKind::Affine, {1, 1}, {1, 1}};
    CHECK(mirror_gauge(g) == g); // self-mirror

    GaugeData jordan{DiagramKind::Affine, {1}, {1}};
    CHECK(mirror_gauge(jordan) == jordan);

    // v = 0: w' from t(lambda) differences, v' = 0
    GaugeData z{DiagramKind::Affine, {0, 0}, {2, 1}};
    GaugeData mz = mirror_gauge(z);
    CHECK(std::accumulate(mz.v.begin(), mz.v.end(), i64(0)) == 0);
    CHECK(static_cast<i64>(mz.w.size()) == 3);
    CHECK(std::accumulate(mz.w.begin(), mz.w.end(), i64(0)) == 2);
}

TEST_CASE("mirror gauge dimension identity and double mirror on random dominant data") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<i64> un(1, 4), val(0, 3);
    int done = 0;
    for (int trial = 0; trial < 2000 && done < 100; ++trial) {
        i64 n = un(rng);
        GaugeData g;
        g.kind = DiagramKind::Affine;
        for (i64 i = 0; i < n; ++i) {
            g.v.push_back(val(rng));
            g.w.push_back(val(rng));
        }
        if (std::accumulate(g.w.begin(), g.w.end(), i64(0)) == 0) continue;
        bool dom = true;
        for (i64 u : u_vector(g)) dom &= u >= 0;
        if (!dom) continue;
        ++done;
        GaugeData m = mirror_gauge(g);
        // the identity 2 sum v = sum 2 v'w' - (v'_p - v'_{p-1})^2 exactly
        i64 lhs = 0;
        for (i64 x : g.v) lhs += 2 * x;
        i64 rhs = 0;
        i64 L = static_cast<i64>(m.v.size());
        for (i64 p = 0; p < L; ++p) {
            i64 prev = m.v[static_cast<std::size_t>((p - 1 + L) % L)];
            rhs += 2 * m.v[static_cast<std::size_t>(p)] * m.w[static_cast<std::size_t>(p)] -
                   (m.v[static_cast<std::size_t>(p)] - prev) * (m.v[static_cast<std::size_t>(p)] - prev);
        }
        CHECK(lhs == rhs);
        // u' = w' - C'v' >= 0
        for (i64 u : u_vector(m)) CHECK(u >= 0);
        // double mirror recovers the input up to cyclic rotation
        GaugeData mm = mirror_gauge(m);
        bool match = false;
        i64 nn = static_cast<i64>(mm.v.size());
        REQUIRE(nn == n);
        for (i64 r = 0; r < nn && !match; ++r) {
            bool ok = true;
            for (i64 i = 0; i < nn; ++i) {
                ok &= mm.v[static_cast<std::size_t>((i + r) % nn)] == g.v[static_cast<std::size_t>(i)];
                ok &= mm.w[static_cast<std::size_t>((i + r) % nn)] == g.w[static_cast<std::size_t>(i)];
            }
            match = ok;
        }
        CHECK(match);
    }
    CHECK(done >= 100);
}

TEST_CASE("gradings") {
    GaugeData g{DiagramKind::Affine, {1, 1}, {1, 1}};
    Gradings gr = gradings(g, 0);
    CHECK(gr.deg_m_y == 3);
    CHECK(gr.deg_m_w == 2);

    GaugeData g2{DiagramKind::Affine, {1, 0}, {4, 0}};
    CHECK(gradings(g2, 0).deg_m_y == 4); // neighbors are 0

    GaugeData jordan{DiagramKind::Affine, {1}, {1}};
    CHECK_THROWS_AS(gradings(jordan, 0), Error);
}

TEST_CASE("gauge to diagram and back") {
    GaugeData g{DiagramKind::Affine, {1}, {1}};
    CHECK(serialize_diagram(gauge_to_diagram(g)) == "affine: 1 x 1 o");
    CHECK(diagram_to_gauge(gauge_to_diagram(g)) == g);

    GaugeData f{DiagramKind::Finite, {1}, {2}};
    CHECK(serialize_diagram(gauge_to_diagram(f)) == "finite: 0 x 1 o 1 o 1 x 0");
    CHECK(diagram_to_gauge(gauge_to_diagram(f)) == f);

    std::mt19937_64 rng(31);
    std::uniform_int_distribution<i64> un(1, 4), val(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        GaugeData r;
        r.kind = DiagramKind::Affine;
        i64 n = un(rng);
        for (i64 i = 0; i < n; ++i) {
            r.v.push_back(val(rng));
            r.w.push_back(val(rng));
        }
        CHECK(diagram_to_gauge(gauge_to_diagram(r)) == r);
        CHECK(signature(gauge_to_diagram(r)).balanced);
    }
}

TEST_CASE("gauge round trip through weights on random data") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<i64> un(1, 5), val(0, 4), kind(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        GaugeData g;
        g.kind = kind(rng) ? DiagramKind::Affine : DiagramKind::Finite;
        i64 n = un(rng) + (g.kind == DiagramKind::Finite ? 1 : 0);
        i64 len = g.kind == DiagramKind::Affine ? n : n - 1;
        for (i64 i = 0; i < len; ++i) {
            g.v.push_back(val(rng));
            g.w.push_back(val(rng));
        }
        auto [lambda, mu] = weights_from_gauge(g);
        CHECK(lambda.charge() == mu.charge());
        CHECK(lambda.dominant());
        CHECK(gauge_from_weights(lambda, mu, g.kind) == g);
        // lambda satisfies the level constraint
        CHECK(lambda.vec.front() - lambda.vec.back() <= lambda.level);
    }
}

TEST_CASE("balanced diagram pair invariants match u and t-lambda differences") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<i64> un(2, 5), val(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        GaugeData g;
        g.kind = DiagramKind::Affine;
        i64 n = un(rng);
        for (i64 i = 0; i < n; ++i) {
            g.v.push_back(val(rng));
            g.w.push_back(val(rng));
        }
        i64 level = 0;
        for (i64 w : g.w) level += w;
        if (level == 0) continue;
        auto [lambda, mu] = weights_from_gauge(g);
        DiagramSignature s = signature(gauge_to_diagram(g));
        // n_pairs_x equals u entrywise
        std::vector<i64> u = u_vector(g);
        CHECK(s.n_pairs_x == u);
        // n_pairs_h equals consecutive t(lambda) differences with the wrap
        GenYoungDiagram tl = transpose_gyd(GenYoungDiagram{lambda.vec, level});
        REQUIRE(static_cast<i64>(s.n_pairs_h.size()) == level);
        for (i64 p = 0; p + 1 < level; ++p)
            CHECK(s.n_pairs_h[static_cast<std::size_t>(p)] ==
                  tl.entries[static_cast<std::size_t>(p)] - tl.entries[static_cast<std::size_t>(p + 1)]);
        CHECK(s.n_pairs_h.back() == n - (tl.entries.front() - tl.entries.back()));
        // expected dimension of a balanced gauge diagram is 2 sum v
        i64 twice = 0;
        for (i64 x : g.v) twice += 2 * x;
        CHECK(s.expected_dim == twice);
    }
}
