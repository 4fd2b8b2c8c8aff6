#include "doctest.h"

#include "bow/matrix.hpp"

#include <random>

using namespace bow;

namespace {

MatQ mat(std::initializer_list<std::initializer_list<i64>> rows) {
    MatQ M(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (auto& r : rows) {
        Index j = 0;
        for (i64 v : r) M(i, j++) = rat(v);
        ++i;
    }
    return M;
}

} // namespace

TEST_CASE("rref picks leftmost pivots and kernel/image are exact") {
    MatQ A = mat({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
    auto red = rref(A);
    CHECK(red.rank() == 2);
    CHECK(red.pivot_cols == std::vector<Index>{0, 1});
    MatQ K = kernel_basis(A);
    CHECK(K.cols() == 1);
    CHECK(is_zero(MatQ(A * K)));
    MatQ I = image_basis(A);
    CHECK(I.cols() == 2);
    CHECK(I.col(0) == A.col(0));
    CHECK(I.col(1) == A.col(1));
}

TEST_CASE("solve_exact and inverse_exact") {
    MatQ A = mat({{2, 1}, {1, 1}});
    MatQ B = mat({{3}, {2}});
    MatQ X = solve_exact(A, B);
    CHECK(MatQ(A * X) == B);
    MatQ Ainv = inverse_exact(A);
    CHECK(MatQ(A * Ainv) == MatQ::Identity(2, 2));
    MatQ sing = mat({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(inverse_exact(sing), Error);
}

TEST_CASE("span operations") {
    MatQ A = mat({{1, 0}, {0, 1}, {0, 0}});
    MatQ B = mat({{0, 0}, {1, 0}, {0, 1}});
    MatQ S = span_intersect(A, B);
    CHECK(S.cols() == 1); // the e2 line
    CHECK(S(0, 0) == 0);
    CHECK(S(2, 0) == 0);
    MatQ U = span_sum(A, B);
    CHECK(U.cols() == 3);
    MatQ F = mat({{1, 0}, {0, 0}});
    MatQ W = mat({{1}, {0}});
    MatQ P = preimage(F, W); // F^{-1}(e1 line) = everything
    CHECK(P.cols() == 2);
}

TEST_CASE("char_poly and rational roots") {
    // companion of (x-1)(x-2)(x+3/2)
    MatQ A = MatQ::Zero(3, 3);
    A(0, 0) = rat(1);
    A(1, 1) = rat(2);
    A(2, 2) = rat(-3, 2);
    A(0, 1) = rat(7); // upper triangular junk does not change the spectrum
    auto roots = eigenvalues_split(A);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == rat(-3, 2));
    CHECK(roots[1] == rat(1));
    CHECK(roots[2] == rat(2));

    // x^2 - 2 does not split
    MatQ B = mat({{0, 2}, {1, 0}});
    CHECK_THROWS_AS(eigenvalues_split(B), Error);
}

TEST_CASE("char_poly matches direct expansion on random matrices") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        MatQ A(3, 3);
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 3; ++j) A(i, j) = rat(coef(rng), 1 + (trial % 3));
        auto p = char_poly(A);
        // oracle: evaluate det(xI - A) at five points by fraction-free expansion
        for (i64 x : {-2, -1, 0, 1, 2}) {
            MatQ M = rat(x) * MatQ::Identity(3, 3) - A;
            Rat det = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
                      M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
                      M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
            CHECK(poly_eval(p, rat(x)) == det);
        }
    }
}

TEST_CASE("generalized eigenspace and sylvester") {
    MatQ J = mat({{2, 1}, {0, 2}});
    MatQ E = generalized_eigenspace(J, rat(2));
    CHECK(E.cols() == 2);
    MatQ P = mat({{1, 0}, {0, 2}});
    MatQ Q = mat({{3}});
    MatQ R = mat({{5}, {7}});
    MatQ X = sylvester_solve(P, Q, R);
    CHECK(MatQ(P * X - X * Q) == R);
}

TEST_CASE("integer factorization helpers") {
    auto f = factorize(Int(2 * 2 * 3 * 25));
    CHECK(f[Int(2)] == 2);
    CHECK(f[Int(3)] == 1);
    CHECK(f[Int(5)] == 2);
    auto d = divisors(Int(12));
    CHECK(d.size() == 6);
}
