#include "doctest.h"

#include "bow/hw.hpp"
#include "bow/weights.hpp"

#include <random>

using namespace bow;

TEST_CASE("hw move formula and involution") {
    // legal instance (l,m,n) = (0,2,2): "0 o 2 x 2" -> "0 x 1 o 2"
    BowDiagram d = parse_diagram("finite: 0 o 2 x 2");
    BowDiagram m = hw_move(d, 0);
    CHECK(serialize_diagram(m) == "finite: 0 x 1 o 2");
    CHECK(signature(m) == signature(d));
    // twice returns the original
    CHECK(hw_move(m, 0) == d);

    // brane creation (0,0,0) -> middle 1
    BowDiagram z = parse_diagram("finite: 0 o 0 x 0");
    CHECK(serialize_diagram(hw_move(z, 0)) == "finite: 0 x 1 o 0");

    // rejected: (l,m,n) = (0,2,0) gives m' = -1
    BowDiagram bad = parse_diagram("finite: 0 o 2 x 0");
    CHECK_THROWS_AS(hw_move(bad, 0), Error);

    // not an o/x pair
    BowDiagram xx = parse_diagram("finite: 0 x 1 x 0");
    CHECK_THROWS_AS(hw_move(xx, 0), Error);
}

TEST_CASE("hw move carries nu_c across with the nu_star shift") {
    BowDiagram d = parse_diagram("affine: 1 o 2 x 2 x\nnu_c: 5\nnu_star: 3");
    BowDiagram m = hw_move(d, 0); // o moves anticlockwise
    CHECK(m.nu_c[0] == rat(2));
    BowDiagram back = hw_move(m, 0); // and back
    CHECK(back == d);
}

TEST_CASE("signature invariance over random affine diagrams and moves") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<i64> nnodes(2, 8), dim(0, 6), coin(0, 1);
        i64 N = nnodes(rng);
        BowDiagram d;
        d.kind = DiagramKind::Affine;
        for (i64 i = 0; i < N; ++i) {
            d.nodes.push_back(coin(rng) ? NodeKind::X : NodeKind::O);
            d.dims.push_back(dim(rng));
        }
        d.nu_r.assign(static_cast<std::size_t>(d.num_o()), Rat(0));
        d.nu_c.assign(static_cast<std::size_t>(d.num_o()), Rat(0));
        DiagramSignature s = signature(d);
        BowDiagram cur = d;
        for (int mv = 0; mv < 12; ++mv) {
            std::vector<i64> legal;
            for (i64 p = 0; p < cur.node_count(); ++p) {
                i64 q = (p + 1) % cur.node_count();
                if (cur.nodes[static_cast<std::size_t>(p)] == cur.nodes[static_cast<std::size_t>(q)]) continue;
                i64 mp = cur.dim_before(p) + cur.dim_after(q) + 1 - cur.dim_after(p);
                if (mp >= 0) legal.push_back(p);
            }
            if (legal.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
            cur = hw_move(cur, legal[pick(rng)]);
            CHECK(signature(cur) == s);
        }
    }
}

TEST_CASE("to_cobalanced on the sl2 instance") {
    BowDiagram d = parse_diagram("finite: 0 x 1 o 1 o 1 x 0");
    // the separated normal form stops at the eq-style layout
    CobalanceResult sep = to_separated(d);
    CHECK(serialize_diagram(sep.diagram) == "finite: 0 o 1 o 2 x 1 x 0");
    CHECK(signature(sep.diagram) == signature(d));
    CHECK(replay_moves(d, sep.moves) == sep.diagram);
    // N_h of the separated form lists t(lambda), N_x lists mu
    CHECK(node_jumps(sep.diagram, NodeKind::O) == std::vector<i64>{1, 1});
    CHECK(node_jumps(sep.diagram, NodeKind::X) == std::vector<i64>{1, 1});

    CobalanceResult res = to_cobalanced(d);
    CHECK(signature(res.diagram).cobalanced);
    CHECK(signature(res.diagram) == signature(d));
    CHECK(serialize_diagram(res.diagram) == "finite: 0 o 1 x 1 x 1 o 0");
    CHECK(replay_moves(d, res.moves) == res.diagram);
}

TEST_CASE("to_cobalanced fixed point and errors") {
    BowDiagram c = parse_diagram("finite: 0 o 1 x 1 x 1 o 0");
    CobalanceResult res = to_cobalanced(c);
    CHECK(res.diagram == c);
    CHECK(res.moves.positions.empty());

    // dominance failure: N(x_1, x_2) < 0
    BowDiagram bad = parse_diagram("finite: 0 x 2 x 0 o 0");
    bool dominance_fails = false;
    for (i64 v : signature(bad).n_pairs_x) dominance_fails |= v < 0;
    CHECK(dominance_fails);
    CHECK_THROWS_AS(to_cobalanced(bad), Error);

    BowDiagram noo = parse_diagram("affine: 1 x 1 x");
    CHECK_THROWS_AS(to_cobalanced(noo), Error);
}

TEST_CASE("cobalanced normalization over random gauge data") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<i64> un(1, 4), ul(0, 3), kind(0, 1);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 120; ++trial) {
        GaugeData g;
        g.kind = kind(rng) ? DiagramKind::Affine : DiagramKind::Finite;
        i64 n = un(rng) + (g.kind == DiagramKind::Finite ? 1 : 0);
        i64 len = g.kind == DiagramKind::Affine ? n : n - 1;
        g.v.clear();
        g.w.clear();
        for (i64 i = 0; i < len; ++i) {
            g.v.push_back(ul(rng));
            g.w.push_back(ul(rng));
        }
        bool dominant = true;
        for (i64 u : u_vector(g)) dominant &= u >= 0;
        if (!dominant) continue;
        BowDiagram d = gauge_to_diagram(g);
        if (d.num_o() == 0) continue;
        ++done;
        CobalanceResult res = to_cobalanced(d);
        CHECK(signature(res.diagram).cobalanced);
        CHECK(signature(res.diagram) == signature(d));
        CHECK(replay_moves(d, res.moves) == res.diagram);
    }
    CHECK(done >= 100);
}

TEST_CASE("balanced_from_signature round trips") {
    BowDiagram a = parse_diagram("affine: 1 x 1 o");
    CHECK(balanced_from_signature(signature(a), DiagramKind::Affine, 1, 1) == a);

    BowDiagram b = parse_diagram("finite: 0 x 1 o 1 o 1 x 0");
    // from the signature of the cobalanced form we recover the balanced one
    BowDiagram c = to_cobalanced(b).diagram;
    CHECK(balanced_from_signature(signature(c), DiagramKind::Finite, 2, 2) == b);

    // shifting quad_h by one breaks the 2n divisibility
    DiagramSignature s = signature(b);
    s.quad_h += 1;
    CHECK_THROWS_AS(balanced_from_signature(s, DiagramKind::Finite, 2, 2), Error);
}

TEST_CASE("balanced_from_signature over random gauge data") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<i64> un(1, 5), ul(0, 4), kind(0, 1);
    for (int trial = 0; trial < 150; ++trial) {
        GaugeData g;
        g.kind = kind(rng) ? DiagramKind::Affine : DiagramKind::Finite;
        i64 n = un(rng) + (g.kind == DiagramKind::Finite ? 1 : 0);
        i64 len = g.kind == DiagramKind::Affine ? n : n - 1;
        for (i64 i = 0; i < len; ++i) {
            g.v.push_back(ul(rng));
            g.w.push_back(ul(rng));
        }
        BowDiagram d = gauge_to_diagram(g);
        BowDiagram back = balanced_from_signature(signature(d), d.kind, d.num_x(), d.num_o());
        CHECK(back == d);
    }
}
