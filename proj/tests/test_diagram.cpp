#include "doctest.h"

#include "bow/diagram.hpp"

using namespace bow;

TEST_CASE("parse and serialize round trip") {
    BowDiagram d = parse_diagram("affine: 1 x 2 o 3 o 2 x");
    CHECK(d.is_affine());
    CHECK(d.node_count() == 4);
    CHECK(d.dims == std::vector<i64>{1, 2, 3, 2});
    CHECK(d.nodes == std::vector<NodeKind>{NodeKind::X, NodeKind::O, NodeKind::O, NodeKind::X});
    CHECK(serialize_diagram(d) == "affine: 1 x 2 o 3 o 2 x");

    BowDiagram f = parse_diagram("finite: 0 x 1 o 1 o 1 x 0");
    CHECK(f.node_count() == 4);
    CHECK(f.dims.size() == 5);
    CHECK(serialize_diagram(f) == "finite: 0 x 1 o 1 o 1 x 0");

    BowDiagram withnu = parse_diagram("affine: 1 x 1 o\nnu_c: 2/4\nnu_star: -3");
    CHECK(withnu.nu_c[0] == rat(1, 2));
    CHECK(withnu.nu_star == rat(-3));
    CHECK(serialize_diagram(withnu) == "affine: 1 x 1 o\nnu_c: 1/2\nnu_star: -3");
    CHECK(parse_diagram(serialize_diagram(withnu)) == withnu);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_diagram("affine: 1 x -2 o"), Error);
    CHECK_THROWS_AS(parse_diagram("affine: 1 y 2 o"), Error);
    CHECK_NOTHROW(parse_diagram("finite: 1 x 2")); // single triangle, dims (1,2)
    CHECK_THROWS_AS(parse_diagram("finite: 1 x"), Error);  // finite must end with a dim
    CHECK_THROWS_AS(parse_diagram("affine: 1 x 2"), Error); // affine must end with a node
    CHECK_THROWS_AS(parse_diagram("affine: 1 x 1 o\nnu_c: 1 2"), Error);
}

TEST_CASE("signature of the finite five-segment example") {
    // dims (v0..v4) = (1,2,3,2,1) on "v0 x v1 o v2 o v3 x v4"
    BowDiagram d = parse_diagram("finite: 1 x 2 o 3 o 2 x 1");
    DiagramSignature s = signature(d);
    // N(h1,h2) = v1 - 2 v2 + v3 = -2, N(x1,x2) = v0 - v1 - v3 + v4 + 2 = 0
    REQUIRE(s.n_pairs_h.size() == 3);
    CHECK(s.n_pairs_h[1] == -2);
    REQUIRE(s.n_pairs_x.size() == 3);
    CHECK(s.n_pairs_x[1] == 0);
}

TEST_CASE("signature of the smallest local model") {
    BowDiagram d = parse_diagram("affine: 1 x 1 o");
    DiagramSignature s = signature(d);
    CHECK(s.balanced);
    CHECK(s.expected_dim == 2);
    // self pairs use the full-circle convention
    CHECK(s.n_pairs_h == std::vector<i64>{1});
    CHECK(s.n_pairs_x == std::vector<i64>{1});
}

TEST_CASE("all-zero dims") {
    BowDiagram d = parse_diagram("affine: 0 x 0 o 0 x 0 o");
    DiagramSignature s = signature(d);
    CHECK(s.expected_dim == 0);
    for (i64 v : s.n_pairs_h) CHECK(v >= 0);
    CHECK(s.quad_h == 0);
    CHECK(s.quad_x == 0);
    CHECK(s.balanced);
    CHECK(s.cobalanced);
}

TEST_CASE("mirror swaps node kinds and zeroes nu") {
    BowDiagram d = parse_diagram("affine: 1 x 1 o\nnu_c: 5");
    BowDiagram m = mirror_diagram(d);
    CHECK(serialize_diagram(m) == "affine: 1 o 1 x");
    CHECK(m.nu_c[0] == 0);
    BowDiagram mm = mirror_diagram(m);
    CHECK(mm.nodes == d.nodes);
    CHECK(mm.dims == d.dims);

    // balanced diagram mirrors to a cobalanced one
    BowDiagram b = parse_diagram("finite: 0 x 1 o 1 o 1 x 0");
    CHECK(signature(b).balanced);
    CHECK(signature(mirror_diagram(b)).cobalanced);
}
