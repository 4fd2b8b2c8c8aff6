#pragma once

#include "bow/factorint.hpp"
#include "bow/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <utility>
#include <vector>

namespace bow {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

using MatQ = Mat<Rat>;
using VecQ = Vec<Rat>;
using RowVecQ = RowVec<Rat>;

using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Row reduction. Pivots are chosen leftmost-first so every basis produced
// from a reduction is deterministic; round-trip tests rely on this.

template <typename S>
struct Rref {
    Mat<S> R;
    std::vector<Index> pivot_cols;
    Index rank() const { return static_cast<Index>(pivot_cols.size()); }
};

template <typename S>
Rref<S> rref(Mat<S> A) {
    Rref<S> out;
    Index rows = A.rows(), cols = A.cols(), r = 0;
    for (Index c = 0; c < cols && r < rows; ++c) {
        Index piv = -1;
        for (Index i = r; i < rows; ++i)
            if (A(i, c) != S(0)) { piv = i; break; }
        if (piv < 0) continue;
        A.row(piv).swap(A.row(r));
        S inv = S(1) / A(r, c);
        for (Index j = c; j < cols; ++j) A(r, j) = A(r, j) * inv;
        for (Index i = 0; i < rows; ++i) {
            if (i == r || A(i, c) == S(0)) continue;
            S f = A(i, c);
            for (Index j = c; j < cols; ++j) A(i, j) = A(i, j) - f * A(r, j);
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.R = std::move(A);
    return out;
}

template <typename S>
Index rank_of(const Mat<S>& A) {
    return rref(A).rank();
}

// Kernel basis as matrix columns, one per free column of A, ordered by the
// free column index.
template <typename S>
Mat<S> kernel_basis(const Mat<S>& A) {
    Rref<S> red = rref(A);
    Index cols = A.cols();
    std::vector<bool> is_pivot(cols, false);
    for (Index c : red.pivot_cols) is_pivot[c] = true;
    std::vector<Index> free_cols;
    for (Index c = 0; c < cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat<S> K = Mat<S>::Zero(cols, static_cast<Index>(free_cols.size()));
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        Index fc = free_cols[j];
        K(fc, static_cast<Index>(j)) = S(1);
        for (std::size_t i = 0; i < red.pivot_cols.size(); ++i)
            K(red.pivot_cols[i], static_cast<Index>(j)) = -red.R(static_cast<Index>(i), fc);
    }
    return K;
}

// Basis of the column span: the original columns at pivot positions.
template <typename S>
Mat<S> image_basis(const Mat<S>& A) {
    Rref<S> red = rref(A);
    Mat<S> B(A.rows(), red.rank());
    for (Index j = 0; j < red.rank(); ++j) B.col(j) = A.col(red.pivot_cols[j]);
    return B;
}

// Solves A X = B exactly; throws when inconsistent.
template <typename S>
Mat<S> solve_exact(const Mat<S>& A, const Mat<S>& B) {
    Index n = A.cols(), k = B.cols();
    Mat<S> aug(A.rows(), n + k);
    aug << A, B;
    Rref<S> red = rref(aug);
    Mat<S> X = Mat<S>::Zero(n, k);
    for (std::size_t i = 0; i < red.pivot_cols.size(); ++i) {
        Index c = red.pivot_cols[i];
        if (c >= n) throw Error("inconsistent linear system");
        X.row(c) = red.R.block(static_cast<Index>(i), n, 1, k);
    }
    return X;
}

template <typename S>
Mat<S> inverse_exact(const Mat<S>& A) {
    if (A.rows() != A.cols()) throw Error("inverse of non-square matrix");
    Mat<S> I = Mat<S>::Identity(A.rows(), A.cols());
    Mat<S> X = solve_exact(A, I);
    if ((A * X - I).cwiseAbs().sum() != S(0)) throw Error("matrix not invertible");
    return X;
}

template <typename S>
bool is_zero(const Mat<S>& A) {
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            if (A(i, j) != S(0)) return false;
    return true;
}

// Do the columns of A and B span the same subspace?
template <typename S>
bool same_span(const Mat<S>& A, const Mat<S>& B) {
    Index ra = rank_of(A), rb = rank_of(B);
    if (ra != rb) return false;
    Mat<S> AB(A.rows(), A.cols() + B.cols());
    AB << A, B;
    return rank_of(AB) == ra;
}

template <typename S>
Mat<S> span_sum(const Mat<S>& A, const Mat<S>& B) {
    Mat<S> AB(A.rows(), A.cols() + B.cols());
    AB << A, B;
    return image_basis(AB);
}

template <typename S>
Mat<S> span_intersect(const Mat<S>& A, const Mat<S>& B) {
    if (A.cols() == 0 || B.cols() == 0) return Mat<S>(A.rows(), 0);
    Mat<S> AB(A.rows(), A.cols() + B.cols());
    AB << A, -B;
    Mat<S> K = kernel_basis(AB);
    Mat<S> V = A * K.topRows(A.cols());
    return image_basis(V);
}

// Basis of f^{-1}(span W) for f given by matrix F.
template <typename S>
Mat<S> preimage(const Mat<S>& F, const Mat<S>& W) {
    Mat<S> aug(F.rows(), F.cols() + W.cols());
    aug << F, -W;
    Mat<S> K = kernel_basis(aug);
    Mat<S> X = K.topRows(F.cols());
    return image_basis(X);
}

// ---------------------------------------------------------------------------
// Polynomials over S, stored low degree first.

template <typename S>
using Poly = std::vector<S>;

template <typename S>
Poly<S> poly_mul(const Poly<S>& a, const Poly<S>& b) {
    Poly<S> out(a.size() + b.size() - 1, S(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

template <typename S>
S poly_eval(const Poly<S>& p, const S& x) {
    S acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

// Divides p by (x - r); remainder must vanish.
template <typename S>
Poly<S> poly_deflate(const Poly<S>& p, const S& r) {
    Poly<S> q(p.size() - 1, S(0));
    S carry(0);
    for (std::size_t i = p.size(); i-- > 1;) {
        S coeff = p[i] + carry;
        q[i - 1] = coeff;
        carry = coeff * r;
    }
    if (p[0] + carry != S(0)) throw Error("poly_deflate: not a root");
    return q;
}

// Monic characteristic polynomial of A, via Faddeev-LeVerrier (exact over Q).
inline Poly<Rat> char_poly(const MatQ& A) {
    Index n = A.rows();
    Poly<Rat> c(static_cast<std::size_t>(n) + 1, Rat(0));
    c[static_cast<std::size_t>(n)] = Rat(1);
    MatQ M = MatQ::Zero(n, n);
    for (Index k = 1; k <= n; ++k) {
        M = A * M + c[static_cast<std::size_t>(n - k + 1)] * MatQ::Identity(n, n);
        MatQ AM = A * M;
        Rat tr(0);
        for (Index i = 0; i < n; ++i) tr += AM(i, i);
        c[static_cast<std::size_t>(n - k)] = -tr / rat(static_cast<i64>(k));
    }
    return c;
}

// Roots with multiplicity of a monic rational polynomial, smallest first.
// Throws when the polynomial does not split over Q.
inline std::vector<Rat> rational_roots_monic(Poly<Rat> p) {
    std::vector<Rat> roots;
    while (p.size() > 1) {
        // strip roots at zero
        if (p[0] == Rat(0)) {
            roots.emplace_back(0);
            p.erase(p.begin());
            continue;
        }
        // substitute x = y/L to get a monic integer polynomial in y
        Int L(1);
        for (auto& c : p) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den().get_mpz_t());
        std::size_t d = p.size() - 1;
        std::vector<Int> q(p.size());
        Int Lp(1);
        for (std::size_t i = p.size(); i-- > 0;) {
            Rat ci = p[i] * Rat(Lp);
            if (!is_integer(ci)) throw Error("internal: integerization failed");
            q[i] = ci.get_num();
            Lp *= L;
        }
        bool found = false;
        for (const Int& dv : divisors(q[0])) {
            for (int sign : {1, -1}) {
                Int y = sign > 0 ? dv : Int(-dv);
                // evaluate q at y
                Int acc(0);
                for (std::size_t i = q.size(); i-- > 0;) acc = acc * y + q[i];
                if (acc == 0) {
                    Rat root = Rat(y) / Rat(L);
                    root.canonicalize();
                    p = poly_deflate(p, root);
                    roots.push_back(root);
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) throw Error("characteristic polynomial does not split over Q");
        (void)d;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::vector<Rat> eigenvalues_split(const MatQ& A) {
    return rational_roots_monic(char_poly(A));
}

// Generalized eigenspace ker (A - w)^n.
inline MatQ generalized_eigenspace(const MatQ& A, const Rat& w) {
    Index n = A.rows();
    MatQ M = A - w * MatQ::Identity(n, n);
    MatQ P = MatQ::Identity(n, n);
    for (Index i = 0; i < n; ++i) P = P * M;
    return kernel_basis(P);
}

// Unique X with P X - X Q = R, assuming Spec(P) and Spec(Q) disjoint.
inline MatQ sylvester_solve(const MatQ& P, const MatQ& Q, const MatQ& R) {
    Index m = P.rows(), n = Q.rows();
    MatQ sys(m * n, m * n);
    sys.setZero();
    VecQ rhs(m * n);
    // unknown X is m x n, vectorized row-major: x_{ij} -> i*n+j
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) {
            Index row = i * n + j;
            for (Index k = 0; k < m; ++k) sys(row, k * n + j) += P(i, k);
            for (Index k = 0; k < n; ++k) sys(row, i * n + k) -= Q(k, j);
            rhs(row) = R(i, j);
        }
    MatQ x = solve_exact(sys, MatQ(rhs));
    MatQ X(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) X(i, j) = x(i * n + j, 0);
    return X;
}

} // namespace bow
