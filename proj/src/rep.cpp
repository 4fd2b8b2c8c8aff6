#include "bow/rep.hpp"

#include "bow/hw.hpp"
#include "bow/weights.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bow {

namespace {

std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

i64 seg_after_node(const BowDiagram& d, i64 pos) {
    return d.is_affine() ? (pos + 1) % d.node_count() : pos + 1;
}

MatQ zeros(i64 r, i64 c) { return MatQ::Zero(r, c); }
MatQ eye(i64 n) { return MatQ::Identity(n, n); }

bool span_contains(const MatQ& span, const MatQ& vecs) {
    if (vecs.cols() == 0) return true;
    MatQ cat(span.rows(), span.cols() + vecs.cols());
    cat << span, vecs;
    return rank_of(cat) == rank_of(span);
}

} // namespace

i64 BowRep::seg_count() const {
    return static_cast<i64>(diagram.dims.size());
}

void BowRep::validate_shapes() const {
    diagram.validate();
    if (triangles.size() != st(diagram.num_x())) throw Error("triangle count mismatch");
    if (twoways.size() != st(diagram.num_o())) throw Error("two-way count mismatch");
    for (i64 p = 0; p < diagram.node_count(); ++p) {
        i64 before = diagram.dim_before(p), after = diagram.dim_after(p);
        if (diagram.nodes[st(p)] == NodeKind::X) {
            const TriangleData& t = triangles[st(diagram.x_index(p))];
            if (t.A.rows() != after || t.A.cols() != before) throw Error("A shape mismatch");
            if (t.B_src.rows() != before || t.B_src.cols() != before) throw Error("B_src shape mismatch");
            if (t.B_tgt.rows() != after || t.B_tgt.cols() != after) throw Error("B_tgt shape mismatch");
            if (t.a.rows() != after || t.a.cols() != 1) throw Error("a shape mismatch");
            if (t.b.rows() != 1 || t.b.cols() != before) throw Error("b shape mismatch");
        } else {
            const TwoWayData& o = twoways[st(diagram.o_index(p))];
            if (o.C.rows() != after || o.C.cols() != before) throw Error("C shape mismatch");
            if (o.D.rows() != before || o.D.cols() != after) throw Error("D shape mismatch");
        }
    }
}

MomentResidual moment_residual(const BowRep& r) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    MomentResidual out;
    for (i64 p = 0; p < d.node_count(); ++p) {
        if (d.nodes[st(p)] != NodeKind::X) continue;
        const TriangleData& t = r.triangles[st(d.x_index(p))];
        out.triangle.push_back(t.B_tgt * t.A - t.A * t.B_src + t.a * t.b);
    }
    i64 nseg = r.seg_count();
    out.segment.assign(st(nseg), std::nullopt);
    for (i64 s = 0; s < nseg; ++s) {
        i64 dim = d.dims[st(s)];
        // node on the right of segment s is node s; on the left, node s-1
        bool has_right = d.is_affine() || s < d.node_count();
        bool has_left = d.is_affine() || s > 0;
        if (!has_left || !has_right) continue; // finite boundary: no equation
        i64 right = s % d.node_count();
        i64 left = d.is_affine() ? (s - 1 + d.node_count()) % d.node_count() : s - 1;
        MatQ E = zeros(dim, dim);
        if (d.nodes[st(left)] == NodeKind::X) {
            const TriangleData& t = r.triangles[st(d.x_index(left))];
            E -= t.B_tgt;
            E += d.nu_star * eye(dim);
        } else {
            const TwoWayData& o = r.twoways[st(d.o_index(left))];
            E += o.C * o.D;
            E -= d.nu_c[st(d.o_index(left))] * eye(dim);
        }
        if (d.nodes[st(right)] == NodeKind::X) {
            const TriangleData& t = r.triangles[st(d.x_index(right))];
            E += t.B_src;
        } else {
            const TwoWayData& o = r.twoways[st(d.o_index(right))];
            E -= o.D * o.C;
            E += d.nu_c[st(d.o_index(right))] * eye(dim);
        }
        out.segment[st(s)] = E;
    }
    return out;
}

bool MomentResidual::all_zero() const {
    for (const MatQ& m : triangle)
        if (!is_zero(m)) return false;
    for (const auto& m : segment)
        if (m && !is_zero(*m)) return false;
    return true;
}

SConditionReport check_s_conditions(const BowRep& r, i64 triangle_index) {
    r.validate_shapes();
    if (triangle_index < 0 || triangle_index >= static_cast<i64>(r.triangles.size()))
        throw Error("triangle index out of range");
    const TriangleData& t = r.triangles[st(triangle_index)];
    SConditionReport rep;
    rep.on_shell = moment_residual(r).all_zero();

    // S1: largest B_src-invariant subspace of Ker A cap Ker b
    MatQ AB(t.A.rows() + 1, t.A.cols());
    AB << t.A, t.b;
    MatQ S = kernel_basis(AB);
    for (;;) {
        if (S.cols() == 0) break;
        MatQ next = span_intersect(S, preimage(t.B_src, S));
        if (next.cols() == S.cols()) { S = next; break; }
        S = next;
    }
    rep.s1 = S.cols() == 0;
    rep.s1_witness = S;

    // S2: smallest B_tgt-invariant subspace containing Im A + Im a
    MatQ T = span_sum(image_basis(t.A), image_basis(t.a));
    for (;;) {
        MatQ next = span_sum(T, image_basis(MatQ(t.B_tgt * T)));
        if (next.cols() == T.cols()) { T = next; break; }
        T = next;
    }
    rep.s2 = T.cols() == t.A.rows();
    rep.s2_witness = T;
    return rep;
}

SConditionReport check_s_conditions(const BowRep& r, SScope scope) {
    if (scope == SScope::SingleTriangle) throw Error("use the triangle-index overload");
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    if (d.num_o() != 0 || !d.is_affine())
        throw Error("chainsaw scope needs an affine diagram with no o nodes");
    i64 n = d.num_x();
    SConditionReport rep;
    rep.on_shell = moment_residual(r).all_zero();

    // (C-S1): largest family S_i with B(S_i) in S_i, S_i in Ker b_i,
    // A_i(S_i) in S_{i+1}
    std::vector<MatQ> S(st(n));
    for (i64 i = 0; i < n; ++i) S[st(i)] = eye(d.dims[st(i)]);
    for (bool changed = true; changed;) {
        changed = false;
        for (i64 i = 0; i < n; ++i) {
            const TriangleData& t = r.triangles[st(i)];
            MatQ next = span_intersect(S[st(i)], kernel_basis(t.b));
            next = span_intersect(next, preimage(t.B_src, S[st(i)]));
            next = span_intersect(next, preimage(t.A, S[st((i + 1) % n)]));
            if (next.cols() != S[st(i)].cols()) {
                S[st(i)] = next;
                changed = true;
            }
        }
    }
    rep.s1 = true;
    for (i64 i = 0; i < n; ++i)
        if (S[st(i)].cols() != 0) rep.s1 = false;

    // (C-S2): smallest family T_i containing Im a_i with B(T_i) in T_i,
    // A_i(T_i) in T_{i+1}
    std::vector<MatQ> T(st(n));
    for (i64 i = 0; i < n; ++i) {
        // a of the triangle targeting segment i is at x (i-1)
        const TriangleData& t = r.triangles[st((i - 1 + n) % n)];
        T[st(i)] = image_basis(t.a);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (i64 i = 0; i < n; ++i) {
            const TriangleData& t = r.triangles[st(i)];
            MatQ grown = span_sum(T[st(i)], image_basis(MatQ(t.B_src * T[st(i)])));
            MatQ pushed = span_sum(T[st((i + 1) % n)], image_basis(MatQ(t.A * T[st(i)])));
            if (grown.cols() != T[st(i)].cols()) {
                T[st(i)] = grown;
                changed = true;
            }
            if (pushed.cols() != T[st((i + 1) % n)].cols()) {
                T[st((i + 1) % n)] = pushed;
                changed = true;
            }
        }
    }
    rep.s2 = true;
    for (i64 i = 0; i < n; ++i)
        if (T[st(i)].cols() != d.dims[st(i)]) rep.s2 = false;
    return rep;
}

bool triangle_full_rank(const BowRep& r, i64 triangle_index) {
    const TriangleData& t = r.triangles[st(triangle_index)];
    return rank_of(t.A) == std::min(t.A.rows(), t.A.cols());
}

// ---------------------------------------------------------------------------
// interval structure

IntervalStructure interval_structure(const BowDiagram& d) {
    d.validate();
    IntervalStructure is;
    std::vector<i64> xs = d.positions(NodeKind::X);
    i64 n = static_cast<i64>(xs.size());
    i64 N = d.node_count();
    if (d.is_affine()) {
        if (n == 0) {
            std::vector<i64> segs, opos;
            for (i64 s = 0; s < N; ++s) segs.push_back(s);
            for (i64 p = 0; p < N; ++p) opos.push_back(p);
            is.segments.push_back(segs);
            is.o_positions.push_back(opos);
            is.in_triangle.push_back(-1);
            is.out_triangle.push_back(-1);
            return is;
        }
        for (i64 i = 0; i < n; ++i) {
            std::vector<i64> segs, opos;
            i64 p = (xs[st(i)] + 1) % N;
            for (;;) {
                segs.push_back(p); // segment before node p
                if (d.nodes[st(p)] == NodeKind::X) break;
                opos.push_back(p);
                p = (p + 1) % N;
            }
            is.segments.push_back(segs);
            is.o_positions.push_back(opos);
            is.in_triangle.push_back(i);
            is.out_triangle.push_back((i + 1) % n);
        }
    } else {
        i64 start = 0;
        for (i64 i = 0; i <= n; ++i) {
            std::vector<i64> segs, opos;
            i64 end = i < n ? xs[st(i)] : N; // segment index bound
            for (i64 s = start; s <= end; ++s) {
                segs.push_back(s);
                if (s < end && d.nodes[st(s)] == NodeKind::O) opos.push_back(s);
            }
            is.segments.push_back(segs);
            is.o_positions.push_back(opos);
            is.in_triangle.push_back(i == 0 ? -1 : i - 1);
            is.out_triangle.push_back(i == n ? -1 : i);
            start = end + 1;
        }
    }
    return is;
}

namespace {

// index of the interval owning segment s
i64 interval_of_segment(const IntervalStructure& is, i64 s) {
    for (std::size_t k = 0; k < is.segments.size(); ++k)
        for (i64 t : is.segments[k])
            if (t == s) return static_cast<i64>(k);
    throw Error("internal: segment not in any interval");
}

// Canonical loop of a segment, whose spectrum is the interval's base
// w-configuration: B_src at a closing x, nu - DC at an o on the right,
// B_tgt - nu_star after an opening x, nu - CD after an o (trailing ends).
MatQ canonical_loop(const BowRep& r, i64 s) {
    const BowDiagram& d = r.diagram;
    i64 N = d.node_count();
    i64 dim = d.dims[st(s)];
    bool has_right = d.is_affine() || s < N;
    if (has_right) {
        i64 right = s % N;
        if (d.nodes[st(right)] == NodeKind::X) return r.triangles[st(d.x_index(right))].B_src;
        const TwoWayData& o = r.twoways[st(d.o_index(right))];
        return MatQ(d.nu_c[st(d.o_index(right))] * eye(dim) - o.D * o.C);
    }
    i64 left = s - 1;
    if (d.nodes[st(left)] == NodeKind::X)
        return MatQ(r.triangles[st(d.x_index(left))].B_tgt - d.nu_star * eye(dim));
    const TwoWayData& o = r.twoways[st(d.o_index(left))];
    return MatQ(d.nu_c[st(d.o_index(left))] * eye(dim) - o.C * o.D);
}

} // namespace

MatQ interval_c_chain(const BowRep& r, i64 interval) {
    IntervalStructure is = interval_structure(r.diagram);
    const std::vector<i64>& segs = is.segments[st(interval)];
    MatQ M = eye(r.diagram.dims[st(segs.front())]);
    for (i64 opos : is.o_positions[st(interval)]) {
        const TwoWayData& o = r.twoways[st(r.diagram.o_index(opos))];
        M = o.C * M;
    }
    return M;
}

MatQ interval_d_chain(const BowRep& r, i64 interval) {
    IntervalStructure is = interval_structure(r.diagram);
    const std::vector<i64>& segs = is.segments[st(interval)];
    MatQ M = eye(r.diagram.dims[st(segs.back())]);
    for (i64 opos : is.o_positions[st(interval)]) {
        const TwoWayData& o = r.twoways[st(r.diagram.o_index(opos))];
        M = M * o.D;
    }
    return M;
}

// ---------------------------------------------------------------------------
// numerical criterion

NuVerdict check_nu_on_subspace(const BowRep& r, const GradedFamily& fam, NuMode mode, bool strict) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    NuVerdict v;
    if (fam.basis.size() != st(r.seg_count())) {
        v.failed_hypothesis = "family is not graded over the segments";
        return v;
    }
    for (i64 s = 0; s < r.seg_count(); ++s)
        if (fam.basis[st(s)].rows() != d.dims[st(s)]) {
            v.failed_hypothesis = "basis shape mismatch on segment " + std::to_string(s);
            return v;
        }

    auto contained = [](const MatQ& img, const MatQ& span) { return span_contains(span, img); };

    // invariance under every map
    for (i64 p = 0; p < d.node_count(); ++p) {
        i64 sb = p, sa = seg_after_node(d, p);
        const MatQ& Fb = fam.basis[st(sb)];
        const MatQ& Fa = fam.basis[st(sa)];
        if (d.nodes[st(p)] == NodeKind::X) {
            const TriangleData& t = r.triangles[st(d.x_index(p))];
            if (!contained(MatQ(t.B_src * Fb), Fb) || !contained(MatQ(t.B_tgt * Fa), Fa)) {
                v.failed_hypothesis = "family not invariant under B";
                return v;
            }
            if (!contained(MatQ(t.A * Fb), Fa)) {
                v.failed_hypothesis = "family not invariant under A";
                return v;
            }
            if (mode == NuMode::SubspaceS) {
                if (!is_zero(MatQ(t.b * Fb))) {
                    v.failed_hypothesis = "b does not kill the family";
                    return v;
                }
                // A restricted to S must be an isomorphism onto S_after
                if (rank_of(Fb) != rank_of(Fa) || rank_of(MatQ(t.A * Fb)) != rank_of(Fb)) {
                    v.failed_hypothesis = "A is not an isomorphism on the family";
                    return v;
                }
            } else {
                if (!contained(image_basis(t.a), Fa)) {
                    v.failed_hypothesis = "Im a not contained in the family";
                    return v;
                }
                // induced map on quotients must be an isomorphism
                i64 cod_b = d.dims[st(sb)] - rank_of(Fb);
                i64 cod_a = d.dims[st(sa)] - rank_of(Fa);
                if (cod_b != cod_a) {
                    v.failed_hypothesis = "A is not an isomorphism on the quotients";
                    return v;
                }
                MatQ pre = preimage(t.A, Fa);
                if (!contained(pre, Fb)) {
                    v.failed_hypothesis = "A is not injective on the quotients";
                    return v;
                }
            }
        } else {
            const TwoWayData& o = r.twoways[st(d.o_index(p))];
            if (!contained(MatQ(o.C * Fb), Fa) || !contained(MatQ(o.D * Fa), Fb)) {
                v.failed_hypothesis = "family not invariant under C/D";
                return v;
            }
        }
    }
    v.is_test_family = true;

    // pairing over wavy lines: each o starts one; its dimension is read off
    // the first segment after the o
    Rat pairing(0);
    bool trivial = true;
    for (i64 p = 0; p < d.node_count(); ++p) {
        if (d.nodes[st(p)] != NodeKind::O) continue;
        i64 s = seg_after_node(d, p);
        i64 dimS = rank_of(fam.basis[st(s)]);
        i64 val = mode == NuMode::SubspaceS ? dimS : d.dims[st(s)] - dimS;
        pairing += d.nu_r[st(d.o_index(p))] * rat(val);
    }
    for (i64 s = 0; s < r.seg_count(); ++s) {
        i64 dimS = rank_of(fam.basis[st(s)]);
        if (mode == NuMode::SubspaceS ? dimS != 0 : dimS != d.dims[st(s)]) trivial = false;
    }
    v.pairing = pairing;
    if (mode == NuMode::SubspaceS)
        v.satisfied = strict && !trivial ? pairing < 0 : pairing <= 0;
    else
        v.satisfied = strict && !trivial ? pairing > 0 : pairing >= 0;
    return v;
}

std::vector<GradedFamily> candidate_families(const BowRep& r, NuMode mode, std::size_t max_count) {
    r.validate_shapes();
    std::set<Rat> values;
    std::vector<MatQ> loops;
    for (i64 s = 0; s < r.seg_count(); ++s) {
        MatQ L = canonical_loop(r, s);
        loops.push_back(L);
        for (const Rat& w : eigenvalues_split(L)) values.insert(w);
    }
    std::vector<Rat> vals(values.begin(), values.end());
    std::vector<GradedFamily> out;
    std::size_t subsets = std::size_t(1) << std::min<std::size_t>(vals.size(), 16);
    for (std::size_t mask = 0; mask < subsets && out.size() < max_count; ++mask) {
        GradedFamily fam;
        for (i64 s = 0; s < r.seg_count(); ++s) {
            MatQ span(r.diagram.dims[st(s)], 0);
            for (std::size_t i = 0; i < vals.size(); ++i)
                if (mask & (std::size_t(1) << i))
                    span = span_sum(span, generalized_eigenspace(loops[st(s)], vals[i]));
            fam.basis.push_back(span);
        }
        NuVerdict v = check_nu_on_subspace(r, fam, mode);
        if (v.is_test_family) out.push_back(std::move(fam));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hurtubise normal form

TriangleData hurtubise_to_triangle(const HurtubiseForm& f) {
    TriangleData t;
    i64 v1 = f.v1, v2 = f.v2;
    if (v1 == v2) {
        i64 n = v1;
        if (f.u.rows() != n || f.u.cols() != n || f.h.rows() != n || f.h.cols() != n)
            throw Error("normal form shape mismatch");
        if (f.I.rows() != n || f.I.cols() != 1 || f.J.rows() != 1 || f.J.cols() != n)
            throw Error("normal form shape mismatch");
        MatQ uinv = inverse_exact(f.u);
        t.A = f.u;
        t.B_src = uinv * f.h * f.u;
        t.B_tgt = f.h - f.I * f.J;
        t.a = f.I;
        t.b = f.J * f.u;
        return t;
    }
    i64 n = std::max(v1, v2), m = std::min(v1, v2);
    if (f.u.rows() != n || f.u.cols() != n || f.eta.rows() != n || f.eta.cols() != n)
        throw Error("normal form shape mismatch");
    // eta row blocks (m, 1, n-m-1), column blocks (m, n-m-1, 1); the zero
    // blocks must actually vanish
    auto block_ok = [&](const MatQ& eta) {
        if (!is_zero(MatQ(eta.block(0, m, m, n - m - 1)))) return false;
        if (!is_zero(MatQ(eta.block(m, m, 1, n - m - 1)))) return false;
        if (!is_zero(MatQ(eta.block(m + 1, 0, n - m - 1, m)))) return false;
        MatQ idblk = eta.block(m + 1, m, n - m - 1, n - m - 1);
        return is_zero(MatQ(idblk - eye(n - m - 1)));
    };
    if (!block_ok(f.eta)) throw Error("eta is not in normal-form shape");
    MatQ h = f.eta.block(0, 0, m, m);
    MatQ g = f.eta.block(0, n - 1, m, 1);
    MatQ fr = f.eta.block(m, 0, 1, m);
    MatQ uinv = inverse_exact(f.u);
    if (v1 > v2) {
        t.A = f.u.topRows(m);
        t.B_src = uinv * f.eta * f.u;
        t.B_tgt = h;
        t.a = g;
        t.b = f.u.bottomRows(1);
    } else {
        MatQ incl = zeros(n, m);
        incl.block(0, 0, m, m) = eye(m);
        MatQ mid = zeros(n, 1);
        mid(m, 0) = Rat(1);
        t.A = MatQ(-(uinv * incl));
        t.B_src = MatQ(-h);
        t.B_tgt = MatQ(-(uinv * f.eta * f.u));
        t.a = uinv * mid;
        t.b = MatQ(-fr);
    }
    return t;
}

HurtubiseForm triangle_to_hurtubise(const TriangleData& t) {
    HurtubiseForm f;
    i64 v1 = t.A.cols(), v2 = t.A.rows();
    f.v1 = v1;
    f.v2 = v2;
    if (v1 == v2) {
        f.u = t.A;
        MatQ uinv = inverse_exact(f.u); // throws when A is singular ((S1)/(S2) fail)
        f.I = t.a;
        f.J = t.b * uinv;
        f.h = t.A * t.B_src * uinv;
        return f;
    }
    if (v1 < v2) {
        // u^{-1} = [-A | a | (-B_tgt) a | (-B_tgt)^2 a | ...]
        i64 n = v2, m = v1;
        MatQ uinv(n, n);
        uinv.block(0, 0, n, m) = -t.A;
        MatQ col = t.a;
        for (i64 k = 0; k < n - m; ++k) {
            uinv.col(m + k) = col;
            col = MatQ(-(t.B_tgt * col));
        }
        f.u = inverse_exact(uinv); // fails iff (S2) fails
        f.eta = MatQ(-(f.u * t.B_tgt * uinv));
        return f;
    }
    // v1 > v2: rows A, then b(B^k - e-corrections), ending with b
    i64 n = v1, m = v2;
    MatQ uprime(n, n);
    uprime.block(0, 0, m, n) = t.A;
    MatQ row = t.b;
    std::vector<MatQ> brows; // b, bB, ..., bB^{n-m-1}
    for (i64 k = 0; k < n - m; ++k) {
        brows.push_back(row);
        row = row * t.B_src;
    }
    for (i64 k = 0; k < n - m; ++k) uprime.row(m + k) = brows[st(n - m - 1 - k)];
    MatQ upinv = solve_exact(uprime, eye(n)); // fails iff (S1) fails
    if (!is_zero(MatQ(uprime * upinv - eye(n)))) throw Error("basis construction fails: (S1) violated");
    MatQ M = uprime * t.B_src * upinv;
    // e = row m+1 of M restricted to the last n-m columns:
    // [e_{n-m-1}, ..., e_1, e_0]
    MatQ erow = M.block(m, m, 1, n - m);
    MatQ u(n, n);
    u.block(0, 0, m, n) = t.A;
    // row for power p (p = n-m-1 .. 1): b(B^p - e_{n-m-1} B^{p-1} - ... - e_{n-m-p})
    for (i64 p = n - m - 1; p >= 1; --p) {
        MatQ acc = brows[st(p)];
        for (i64 j = 1; j <= p; ++j) acc -= erow(0, j - 1) * brows[st(p - j)];
        u.row(m + (n - m - 1 - p)) = acc;
    }
    u.row(n - 1) = t.b;
    f.u = u;
    MatQ uinv = inverse_exact(u);
    f.eta = u * t.B_src * uinv;
    return f;
}

TriangleData reverse_triangle(const TriangleData& t) {
    i64 v1 = t.A.cols(), v2 = t.A.rows();
    if (v1 == v2) {
        TriangleData out;
        MatQ Ainv = inverse_exact(t.A);
        out.A = Ainv;
        out.B_src = MatQ(-t.B_tgt);
        out.B_tgt = MatQ(-t.B_src);
        out.a = Ainv * t.a;
        out.b = t.b * Ainv;
        return out;
    }
    HurtubiseForm f = triangle_to_hurtubise(t);
    std::swap(f.v1, f.v2);
    return hurtubise_to_triangle(f);
}

// ---------------------------------------------------------------------------
// Hanany-Witten transition at the matrix level

BowRep hw_transition_rep(const BowRep& r, i64 position, HwDirection dir) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    i64 N = d.node_count();
    if (position < 0 || position >= N) throw Error("position out of range");
    i64 q = position + 1;
    if (d.is_affine())
        q %= N;
    else if (q >= N)
        throw Error("position has no right neighbor");

    NodeKind left = d.nodes[st(position)], right = d.nodes[st(q)];
    BowDiagram nd = hw_move(d, position); // also validates the pair and m'

    BowRep out;
    out.diagram = nd;
    out.triangles = r.triangles;
    out.twoways = r.twoways;

    if (dir == HwDirection::Forward) {
        if (left != NodeKind::O || right != NodeKind::X)
            throw Error("forward transition needs an o-then-x junction");
        i64 oi = d.o_index(position), ti = d.x_index(q);
        const TwoWayData& o = r.twoways[st(oi)];
        const TriangleData& t = r.triangles[st(ti)];
        i64 l = d.dim_before(position), m = d.dim_after(position), nn = d.dim_after(q);
        i64 mp = l + nn + 1 - m;
        Rat nuo = d.nu_c[st(oi)];

        MatQ alpha(l + nn + 1, m);
        alpha << o.D, t.A, t.b;
        if (rank_of(alpha) != m) throw Error("alpha = [D;A;b] not injective: (S1) fails at the junction");

        // pivot-complement basis of Coker alpha
        i64 W = l + nn + 1;
        MatQ full(W, W);
        full.block(0, 0, W, m) = alpha;
        std::vector<i64> kept;
        i64 have = m;
        for (i64 e = 0; e < W && have < W; ++e) {
            MatQ trial = full.leftCols(have + 1);
            trial.col(have) = MatQ::Zero(W, 1);
            trial(e, have) = Rat(1);
            if (rank_of(trial) == have + 1) {
                full.col(have) = trial.col(have);
                kept.push_back(e);
                ++have;
            }
        }
        if (have != W) throw Error("internal: cokernel basis incomplete");
        MatQ finv = inverse_exact(full);
        MatQ proj = finv.bottomRows(mp); // класс coordinates in the kept basis

        MatQ Anew = proj.leftCols(l);
        MatQ Dnew = MatQ(-proj.block(0, l, mp, nn));
        MatQ anew = proj.rightCols(1);
        MatQ bnew = t.b * o.C;
        MatQ beta(nn, W);
        beta << MatQ(t.A * o.C), MatQ(t.B_tgt - nuo * eye(nn)), t.a;
        MatQ Cnew(nn, mp);
        for (std::size_t j = 0; j < kept.size(); ++j) Cnew.col(static_cast<i64>(j)) = beta.col(kept[j]);

        TriangleData tn;
        tn.A = Anew;
        tn.a = anew;
        tn.b = bnew;
        tn.B_src = MatQ(nuo * eye(l) - o.D * o.C);
        tn.B_tgt = MatQ(nuo * eye(mp) - Dnew * Cnew);
        out.triangles[st(ti)] = tn;
        out.twoways[st(oi)] = TwoWayData{Cnew, Dnew};
        out.validate_shapes();
        return out;
    }

    if (left != NodeKind::X || right != NodeKind::O)
        throw Error("inverse transition needs an x-then-o junction");
    i64 ti = d.x_index(position), oi = d.o_index(q);
    const TriangleData& t = r.triangles[st(ti)];
    const TwoWayData& o = r.twoways[st(oi)];
    i64 l = d.dim_before(position), m2 = d.dim_after(position), nn = d.dim_after(q);
    i64 m = l + nn + 1 - m2;
    Rat nuo = d.nu_c[st(oi)] + d.nu_star; // the o's parameter before it crossed

    i64 W = l + nn + 1;
    MatQ betanew(m2, W);
    betanew << t.A, MatQ(-o.D), t.a;
    if (rank_of(betanew) != m2) throw Error("[A,-D,a] not surjective: (S2) fails at the junction");
    MatQ K = kernel_basis(betanew); // W x m
    if (K.cols() != m) throw Error("internal: kernel dimension mismatch");

    TwoWayData on;
    TriangleData tn;
    on.D = K.topRows(l);            // D : V2 -> V1
    tn.A = K.block(l, 0, nn, m);    // A : V2 -> V3
    tn.b = K.bottomRows(1);
    tn.a = o.C * t.a;
    MatQ stacked(W, l);
    stacked << MatQ(nuo * eye(l) - t.B_src), MatQ(o.C * t.A), t.b;
    on.C = solve_exact(K, stacked);
    if (!is_zero(MatQ(K * on.C - stacked))) throw Error("junction data is not on shell: C reconstruction failed");
    tn.B_src = MatQ(nuo * eye(m) - on.C * on.D);
    tn.B_tgt = MatQ(nuo * eye(nn) - o.C * o.D);
    out.triangles[st(ti)] = tn;
    out.twoways[st(oi)] = on;
    out.validate_shapes();
    return out;
}

// ---------------------------------------------------------------------------
// factorization

FactorPair factorize_at(const BowRep& r, const std::vector<Rat>& group) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    std::set<Rat> gset(group.begin(), group.end());
    i64 nseg = r.seg_count();

    // spectral split of every segment by base values
    std::vector<MatQ> inside(st(nseg)), outside(st(nseg)), gauge(st(nseg)), gauge_inv(st(nseg));
    for (i64 s = 0; s < nseg; ++s) {
        i64 dim = d.dims[st(s)];
        MatQ L = canonical_loop(r, s);
        std::vector<Rat> ev = eigenvalues_split(L);
        std::set<Rat> distinct(ev.begin(), ev.end());
        MatQ U(dim, 0), V(dim, 0);
        for (const Rat& w : distinct) {
            MatQ E = generalized_eigenspace(L, w);
            if (gset.count(w))
                U = span_sum(U, E);
            else
                V = span_sum(V, E);
        }
        if (U.cols() + V.cols() != dim) throw Error("spectral split failed on a segment");
        inside[st(s)] = U;
        outside[st(s)] = V;
        MatQ G(dim, dim);
        G << U, V;
        gauge[st(s)] = G;
        gauge_inv[st(s)] = inverse_exact(G);
    }

    BowRep a, b;
    a.diagram = d;
    b.diagram = d;
    for (i64 s = 0; s < nseg; ++s) {
        a.diagram.dims[st(s)] = inside[st(s)].cols();
        b.diagram.dims[st(s)] = outside[st(s)].cols();
    }

    for (i64 p = 0; p < d.node_count(); ++p) {
        i64 sb = p, sa = seg_after_node(d, p);
        i64 ub = inside[st(sb)].cols(), ua = inside[st(sa)].cols();
        i64 wb = outside[st(sb)].cols(), wa = outside[st(sa)].cols();
        if (d.nodes[st(p)] == NodeKind::X) {
            const TriangleData& t = r.triangles[st(d.x_index(p))];
            MatQ A2 = gauge_inv[st(sa)] * t.A * gauge[st(sb)];
            MatQ Bs2 = gauge_inv[st(sb)] * t.B_src * gauge[st(sb)];
            MatQ Bt2 = gauge_inv[st(sa)] * t.B_tgt * gauge[st(sa)];
            MatQ a2 = gauge_inv[st(sa)] * t.a;
            MatQ b2 = t.b * gauge[st(sb)];
            if (!is_zero(MatQ(Bs2.block(0, ub, ub, wb))) || !is_zero(MatQ(Bs2.block(ub, 0, wb, ub))) ||
                !is_zero(MatQ(Bt2.block(0, ua, ua, wa))) || !is_zero(MatQ(Bt2.block(ua, 0, wa, ua))))
                throw Error("loops do not block-diagonalize; representation off shell?");
            // off-diagonal A blocks must be the unique Sylvester solutions
            auto disjoint = [](const MatQ& P, const MatQ& Q) {
                std::vector<Rat> sp = eigenvalues_split(P), sq = eigenvalues_split(Q);
                for (const Rat& x : sp)
                    for (const Rat& y : sq)
                        if (x == y) return false;
                return true;
            };
            MatQ Auw = A2.block(0, ub, ua, wb);  // from outside(src) to inside(tgt)
            MatQ Awu = A2.block(ua, 0, wa, ub);
            MatQ rhs_uw = MatQ(-(a2.topRows(ua) * b2.rightCols(wb)));
            MatQ rhs_wu = MatQ(-(a2.bottomRows(wa) * b2.leftCols(ub)));
            MatQ BtU = Bt2.block(0, 0, ua, ua), BtW = Bt2.block(ua, ua, wa, wa);
            MatQ BsU = Bs2.block(0, 0, ub, ub), BsW = Bs2.block(ub, ub, wb, wb);
            if (!disjoint(BtU, BsW) || !disjoint(BtW, BsU))
                throw Error("overlapping spectra across a triangle junction");
            MatQ X_uw = sylvester_solve(BtU, BsW, rhs_uw);
            MatQ X_wu = sylvester_solve(BtW, BsU, rhs_wu);
            if (!is_zero(MatQ(Auw - X_uw)) || !is_zero(MatQ(Awu - X_wu)))
                throw Error("off-diagonal A blocks are not the Sylvester solutions");
            TriangleData ta{A2.block(0, 0, ua, ub), Bs2.block(0, 0, ub, ub), Bt2.block(0, 0, ua, ua),
                            a2.topRows(ua), b2.leftCols(ub)};
            TriangleData tb{A2.block(ua, ub, wa, wb), Bs2.block(ub, ub, wb, wb), Bt2.block(ua, ua, wa, wa),
                            a2.bottomRows(wa), b2.rightCols(wb)};
            a.triangles.push_back(ta);
            b.triangles.push_back(tb);
        } else {
            const TwoWayData& o = r.twoways[st(d.o_index(p))];
            MatQ C2 = gauge_inv[st(sa)] * o.C * gauge[st(sb)];
            MatQ D2 = gauge_inv[st(sb)] * o.D * gauge[st(sa)];
            if (!is_zero(MatQ(C2.block(0, ub, ua, wb))) || !is_zero(MatQ(C2.block(ua, 0, wa, ub))) ||
                !is_zero(MatQ(D2.block(0, ua, ub, wa))) || !is_zero(MatQ(D2.block(ub, 0, wb, ua))))
                throw Error("two-way off-diagonal blocks do not vanish; overlapping spectra?");
            a.twoways.push_back(TwoWayData{C2.block(0, 0, ua, ub), D2.block(0, 0, ub, ua)});
            b.twoways.push_back(TwoWayData{C2.block(ua, ub, wa, wb), D2.block(ub, ua, wb, wa)});
        }
    }
    a.validate_shapes();
    b.validate_shapes();
    return FactorPair{std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// generic sampling

BowRep sample_generic(const BowDiagram& d, const WConfig& wcfg) {
    d.validate();
    IntervalStructure is = interval_structure(d);
    std::size_t K = is.segments.size();
    if (wcfg.size() != K) throw Error("w-configuration needs one list per x-interval");

    for (std::size_t k = 0; k < K; ++k) {
        i64 dim0 = d.dims[st(is.segments[k].front())];
        for (i64 s : is.segments[k])
            if (d.dims[st(s)] != dim0)
                throw Error("inconsistent w across arrows: interval dimensions differ");
        if (static_cast<i64>(wcfg[k].size()) != dim0)
            throw Error("w list length does not match the interval dimension");
        for (std::size_t i = 0; i < wcfg[k].size(); ++i)
            for (std::size_t j = i + 1; j < wcfg[k].size(); ++j)
                if (wcfg[k][i] == wcfg[k][j]) throw Error("coincident eigenvalues in an interval");
    }

    BowRep r;
    r.diagram = d;
    r.triangles.resize(st(d.num_x()));
    r.twoways.resize(st(d.num_o()));

    auto diag_of = [&](const std::vector<Rat>& w) {
        MatQ B = zeros(static_cast<i64>(w.size()), static_cast<i64>(w.size()));
        for (std::size_t i = 0; i < w.size(); ++i) B(static_cast<i64>(i), static_cast<i64>(i)) = w[i];
        return B;
    };
    auto ones_col = [&](i64 n) {
        MatQ a = zeros(n, 1);
        for (i64 i = 0; i < n; ++i) a(i, 0) = Rat(1);
        return a;
    };

    // two-way parts: C = id, D = diag(nu_o - w_m)
    for (std::size_t k = 0; k < K; ++k) {
        for (i64 opos : is.o_positions[k]) {
            i64 oi = d.o_index(opos);
            i64 dim = static_cast<i64>(wcfg[k].size());
            MatQ D = zeros(dim, dim);
            for (i64 i = 0; i < dim; ++i) D(i, i) = d.nu_c[st(oi)] - wcfg[k][st(i)];
            r.twoways[st(oi)] = TwoWayData{eye(dim), D};
        }
    }

    // triangles between intervals
    std::vector<i64> xs = d.positions(NodeKind::X);
    for (std::size_t k = 0; k < K; ++k) {
        i64 tout = is.out_triangle[k];
        if (tout < 0) continue;
        // target interval: the one whose in_triangle is tout
        i64 ktgt = -1;
        for (std::size_t j = 0; j < K; ++j)
            if (is.in_triangle[j] == tout) ktgt = static_cast<i64>(j);
        if (ktgt < 0) throw Error("internal: dangling triangle");
        const std::vector<Rat>& wsrc = wcfg[k];
        const std::vector<Rat>& wtgt = wcfg[st(ktgt)];
        i64 vs = static_cast<i64>(wsrc.size()), vt = static_cast<i64>(wtgt.size());
        TriangleData t;
        t.B_src = diag_of(wsrc);
        t.B_tgt = MatQ(diag_of(wtgt) + d.nu_star * eye(vt));
        if (static_cast<i64>(k) == ktgt) {
            // self junction (single x-interval)
            if (d.nu_star == 0) {
                t.A = eye(vs);
                t.a = zeros(vs, 1);
                t.b = zeros(1, vs);
            } else {
                t.A = zeros(vt, vs);
                for (i64 i = 0; i < vt; ++i)
                    for (i64 j = 0; j < vs; ++j) {
                        Rat den = wsrc[st(j)] - wtgt[st(i)] - d.nu_star;
                        if (den == 0) throw Error("coincident eigenvalues across the junction");
                        t.A(i, j) = Rat(-d.nu_star) / den;
                    }
                t.a = ones_col(vt);
                Rat neg_star = -d.nu_star;
                t.b = MatQ(neg_star * ones_col(vs).transpose());
            }
        } else {
            t.A = zeros(vt, vs);
            for (i64 i = 0; i < vt; ++i)
                for (i64 j = 0; j < vs; ++j) {
                    Rat den = wsrc[st(j)] - wtgt[st(i)] - d.nu_star;
                    if (den == 0) throw Error("coincident eigenvalues across the junction");
                    t.A(i, j) = Rat(1) / den;
                }
            t.a = ones_col(vt);
            t.b = ones_col(vs).transpose();
        }
        r.triangles[st(tout)] = t;
    }
    r.validate_shapes();
    return r;
}

// ---------------------------------------------------------------------------
// coordinates

Coordinates eval_coordinates(const BowRep& r) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    IntervalStructure is = interval_structure(d);
    Coordinates out;
    for (std::size_t k = 0; k < is.segments.size(); ++k) {
        i64 slast = is.segments[k].back();
        i64 dim = d.dims[st(slast)];
        std::vector<Rat> w, y;
        if (dim > 0) {
            MatQ B = canonical_loop(r, slast);
            w = eigenvalues_split(B);
            i64 tin = is.in_triangle[k], tout = is.out_triangle[k];
            if (tin >= 0 && tout >= 0) {
                MatQ chain = interval_c_chain(r, static_cast<i64>(k));
                const TriangleData& ttin = r.triangles[st(tin)];
                const TriangleData& ttout = r.triangles[st(tout)];
                MatQ Bl = ttout.B_src; // loop on the last segment
                for (std::size_t kk = 0; kk < w.size(); ++kk) {
                    MatQ poly = eye(dim);
                    for (std::size_t ll = 0; ll < w.size(); ++ll)
                        if (ll != kk) poly = poly * (Bl - w[ll] * eye(dim));
                    if (tin == tout) {
                        // single x: trace coordinate
                        MatQ M = ttout.A * poly * chain;
                        Rat tr(0);
                        for (i64 i = 0; i < M.rows(); ++i) tr += M(i, i);
                        y.push_back(tr);
                    } else {
                        MatQ val = ttout.b * poly * chain * ttin.a;
                        y.push_back(val(0, 0));
                    }
                }
            }
        }
        out.w.push_back(std::move(w));
        out.y.push_back(std::move(y));
    }
    return out;
}

// ---------------------------------------------------------------------------
// collapse and scaling

BowRep collapse_chainsaw(const BowRep& r) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    if (!d.is_affine()) throw Error("collapse expects the affine gauge layout");
    GaugeData g = diagram_to_gauge(d); // needs the balanced gauge layout
    IntervalStructure is = interval_structure(d);

    GaugeData cg = g;
    for (i64& wi : cg.w) wi = 0;
    BowRep out;
    out.diagram = gauge_to_diagram(cg);
    out.diagram.nu_star = d.nu_star;

    i64 n = d.num_x();
    out.triangles.resize(st(n));
    for (i64 i = 0; i < n; ++i) {
        // interval i sits between x_i and x_{i+1}: in_triangle = i,
        // out_triangle = i+1 mod n. The collapsed triangle keeps the
        // out-triangle's index; its head loop and a come from that triangle.
        i64 tin = is.in_triangle[st(i)], tout = is.out_triangle[st(i)];
        MatQ chain = interval_c_chain(r, i);
        const TriangleData& tHead = r.triangles[st(tin)];  // targets V_i^0
        const TriangleData& tTail = r.triangles[st(tout)]; // sources V_i^{w_i}
        TriangleData nt;
        nt.A = tTail.A * chain;
        nt.b = tTail.b * chain;
        nt.a = tTail.a;
        nt.B_src = MatQ(tHead.B_tgt - d.nu_star * eye(tHead.B_tgt.rows()));
        nt.B_tgt = tTail.B_tgt;
        out.triangles[st(tout)] = nt;
    }
    out.validate_shapes();
    return out;
}

BowRep scale_rep(const BowRep& r, const Rat& t) {
    if (t == 0) throw Error("scaling by zero");
    r.validate_shapes();
    auto ipow = [&](i64 e) {
        Rat acc(1);
        for (i64 i = 0; i < (e >= 0 ? e : -e); ++i) acc *= t;
        if (e < 0) acc = Rat(1) / acc;
        return acc;
    };
    BowRep out = r;
    Rat t2 = t * t;
    out.diagram.nu_star = Rat(r.diagram.nu_star * t2);
    for (Rat& nu : out.diagram.nu_c) nu = Rat(nu * t2);
    for (std::size_t i = 0; i < r.triangles.size(); ++i) {
        const TriangleData& tr = r.triangles[i];
        i64 v1 = tr.A.cols(), v2 = tr.A.rows();
        TriangleData& o = out.triangles[i];
        o.B_src = t2 * tr.B_src;
        o.B_tgt = t2 * tr.B_tgt;
        o.a = ipow(1 + v1 - v2) * tr.a;
        o.b = ipow(1 + v2 - v1) * tr.b;
    }
    for (std::size_t i = 0; i < r.twoways.size(); ++i) {
        out.twoways[i].C = t * r.twoways[i].C;
        out.twoways[i].D = t * r.twoways[i].D;
    }
    return out;
}

std::vector<Rat> invariant_battery(const BowRep& r, i64 word_cap) {
    r.validate_shapes();
    const BowDiagram& d = r.diagram;
    std::vector<Rat> out;
    auto push_poly = [&](const MatQ& M) {
        for (const Rat& c : char_poly(M)) out.push_back(c);
    };
    for (const TriangleData& t : r.triangles) {
        push_poly(t.B_src);
        push_poly(t.B_tgt);
    }
    for (const TwoWayData& o : r.twoways) {
        push_poly(MatQ(o.C * o.D));
        push_poly(MatQ(o.D * o.C));
    }
    IntervalStructure is = interval_structure(d);
    for (std::size_t k = 0; k < is.segments.size(); ++k) {
        i64 tin = is.in_triangle[k], tout = is.out_triangle[k];
        if (tin < 0 || tout < 0) continue;
        MatQ chain = interval_c_chain(r, static_cast<i64>(k));
        const TriangleData& ti = r.triangles[st(tin)];
        const TriangleData& to = r.triangles[st(tout)];
        i64 dim = d.dims[st(is.segments[k].back())];
        MatQ Bp = eye(dim);
        for (i64 e = 0; e <= word_cap; ++e) {
            if (tin == tout) {
                MatQ M = to.A * Bp * chain;
                Rat tr(0);
                for (i64 i = 0; i < M.rows(); ++i) tr += M(i, i);
                out.push_back(tr);
            } else {
                MatQ val = to.b * Bp * chain * ti.a;
                out.push_back(val(0, 0));
            }
            Bp = Bp * to.B_src;
        }
    }
    return out;
}

} // namespace bow
