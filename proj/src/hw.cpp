#include "bow/hw.hpp"

#include <algorithm>
#include <numeric>

namespace bow {

namespace {

std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

} // namespace

BowDiagram hw_move(const BowDiagram& d, i64 position) {
    d.validate();
    i64 n = d.node_count();
    if (position < 0 || position >= n) throw Error("hw position out of range");
    i64 q = position + 1;
    if (d.is_affine())
        q %= n;
    else if (q >= n)
        throw Error("hw position has no right neighbor");
    NodeKind a = d.nodes[st(position)], b = d.nodes[st(q)];
    if (a == b) throw Error("hw position is not an o/x pair");

    i64 l = d.dim_before(position);
    i64 m = d.dim_after(position);
    i64 r = d.dim_after(q);
    i64 mp = l + r + 1 - m;
    if (mp < 0) throw Error("hw move not realizable: middle dimension would be negative");

    BowDiagram out = d;
    std::swap(out.nodes[st(position)], out.nodes[st(q)]);
    out.dims[st(q)] = mp;

    // the o's nu parameters ride along; nu_c shifts by -+ nu_star
    i64 opos = a == NodeKind::O ? position : q;
    i64 oidx = d.o_index(opos);
    if (a == NodeKind::O)
        out.nu_c[st(oidx)] = d.nu_c[st(oidx)] - d.nu_star; // o moved anticlockwise
    else
        out.nu_c[st(oidx)] = d.nu_c[st(oidx)] + d.nu_star; // o moved clockwise
    return out;
}

BowDiagram replay_moves(const BowDiagram& d, const MoveList& moves) {
    BowDiagram cur = d;
    for (i64 p : moves.positions) cur = hw_move(cur, p);
    return cur;
}

namespace {

// Runs the constructive normalization while tracking node identities, so
// that the base x stays meaningful even when nodes slide across the
// serialization origin of an affine diagram.
struct Normalizer {
    BowDiagram d;
    MoveList moves;
    std::vector<i64> ids;
    i64 base_id = -1; // id of the anchor x (affine); finite anchors at the left end

    explicit Normalizer(const BowDiagram& start) : d(start) {
        ids.resize(st(d.node_count()));
        std::iota(ids.begin(), ids.end(), 0);
        for (i64 p = 0; p < d.node_count(); ++p)
            if (d.nodes[st(p)] == NodeKind::X) { base_id = ids[st(p)]; break; }
    }

    void move(i64 pos) {
        d = hw_move(d, pos);
        i64 q = d.is_affine() ? (pos + 1) % d.node_count() : pos + 1;
        std::swap(ids[st(pos)], ids[st(q)]);
        moves.positions.push_back(pos);
    }

    i64 pos_of_id(i64 id) const {
        for (i64 p = 0; p < d.node_count(); ++p)
            if (ids[st(p)] == id) return p;
        throw Error("internal: lost node id");
    }

    // x positions in anticlockwise order starting from the anchor.
    std::vector<i64> x_order() const {
        std::vector<i64> xs = d.positions(NodeKind::X);
        if (d.is_affine() && !xs.empty()) {
            i64 bp = pos_of_id(base_id);
            std::size_t k = 0;
            while (xs[k] != bp) ++k;
            std::rotate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
        }
        return xs;
    }

    // Arc index of a node position: arc k runs from x_k (exclusive,
    // ordering as in x_order) to x_{k+1}. Finite diagrams also have the
    // left boundary arc -1.
    i64 arc_of(i64 pos) const {
        std::vector<i64> xs = x_order();
        i64 nx = static_cast<i64>(xs.size());
        if (d.is_affine()) {
            i64 bp = xs[0];
            i64 rel = (pos - bp + d.node_count()) % d.node_count();
            i64 arc = 0;
            for (i64 k = 1; k < nx; ++k) {
                i64 rk = (xs[st(k)] - bp + d.node_count()) % d.node_count();
                if (rk < rel) arc = k;
            }
            return arc;
        }
        i64 arc = -1;
        for (i64 k = 0; k < nx; ++k)
            if (xs[st(k)] < pos) arc = k;
        return arc;
    }

    i64 base_arc() const { return d.is_affine() ? 0 : -1; }

    // Move every o clockwise, one x at a time, until all sit in the base arc.
    void gather() {
        i64 fuel = d.node_count() * d.node_count() * (d.num_o() + 2) + 16;
        for (;;) {
            i64 pick = -1;
            for (i64 p = 0; p < d.node_count(); ++p) {
                if (d.nodes[st(p)] != NodeKind::X) continue;
                i64 q = p + 1;
                if (d.is_affine())
                    q %= d.node_count();
                else if (q >= d.node_count())
                    continue;
                if (d.nodes[st(q)] != NodeKind::O) continue;
                if (arc_of(q) == base_arc()) continue;
                pick = p;
                break;
            }
            if (pick < 0) {
                for (i64 p = 0; p < d.node_count(); ++p)
                    if (d.nodes[st(p)] == NodeKind::O && arc_of(p) != base_arc())
                        throw Error("internal: gather stalled");
                return;
            }
            move(pick);
            if (--fuel < 0) throw Error("internal: gather did not terminate");
        }
    }

    // Move `count` o's anticlockwise across the x currently at `xpos`.
    void push_across(i64 xpos, i64 count) {
        for (i64 c = 0; c < count; ++c) {
            i64 p = xpos - 1;
            if (p < 0) {
                if (!d.is_affine()) throw Error("internal: no o to push");
                p = d.node_count() - 1;
            }
            if (d.nodes[st(p)] != NodeKind::O) throw Error("internal: no o to push");
            move(p);
            xpos = p;
        }
    }

    // After gathering, give arc k its target o count. targets[k] is indexed
    // like x_order arcs; for finite diagrams targets[-1] is passed as the
    // separate base entry and arcs 0..n-1 are targets[0..].
    void distribute(const std::vector<i64>& targets) {
        i64 narc = static_cast<i64>(targets.size());
        std::vector<i64> through(st(narc), 0);
        i64 acc = 0;
        for (i64 k = narc - 1; k >= 1; --k) {
            acc += targets[st(k)];
            through[st(k)] = acc;
        }
        for (i64 k = 1; k < narc; ++k) {
            if (through[st(k)] == 0) continue;
            std::vector<i64> xs = x_order();
            push_across(xs[st(k)], through[st(k)]);
        }
    }

    // finite variant: o's must first cross x_0 out of the left boundary arc
    void distribute_finite(const std::vector<i64>& arc_targets) {
        // arc_targets[k] for arcs 0..n-1 (right of x_k)
        i64 narc = static_cast<i64>(arc_targets.size());
        std::vector<i64> through(st(narc), 0);
        for (i64 k = narc - 1; k >= 0; --k)
            through[st(k)] = arc_targets[st(k)] + (k + 1 < narc ? through[st(k + 1)] : 0);
        for (i64 k = 0; k < narc; ++k) {
            if (through[st(k)] == 0) continue;
            std::vector<i64> xs = x_order();
            push_across(xs[st(k)], through[st(k)]);
        }
    }

    // One round: every x crosses one adjacent o, clockwise side when
    // forward, anticlockwise side when backward.
    void sweep_round(bool forward) {
        std::vector<i64> need;
        for (i64 p = 0; p < d.node_count(); ++p)
            if (d.nodes[st(p)] == NodeKind::X) need.push_back(ids[st(p)]);
        i64 fuel = d.node_count() * d.node_count() + 16;
        while (!need.empty()) {
            bool progressed = false;
            for (std::size_t i = 0; i < need.size(); ++i) {
                i64 pos = pos_of_id(need[i]);
                if (forward) {
                    i64 p = pos - 1;
                    if (p < 0) {
                        if (!d.is_affine()) continue;
                        p = d.node_count() - 1;
                    }
                    if (d.nodes[st(p)] != NodeKind::O) continue;
                    move(p);
                } else {
                    i64 q = pos + 1;
                    if (d.is_affine())
                        q %= d.node_count();
                    else if (q >= d.node_count())
                        continue;
                    if (d.nodes[st(q)] != NodeKind::O) continue;
                    move(pos);
                }
                need.erase(need.begin() + static_cast<std::ptrdiff_t>(i));
                progressed = true;
                break;
            }
            if (!progressed) throw Error("internal: sweep stalled");
            if (--fuel < 0) throw Error("internal: sweep did not terminate");
        }
    }

    void sweep_rounds() {
        std::vector<i64> jump = node_jumps(d, NodeKind::X);
        if (jump.empty()) return;
        i64 c = jump[0];
        for (i64 j : jump)
            if (j != c) throw Error("internal: distribution left unequal x jumps");
        for (i64 rd = 0; rd < (c >= 0 ? c : -c); ++rd) sweep_round(c > 0);
    }
};

CobalanceResult normalize(const BowDiagram& d, bool full) {
    d.validate();
    if (d.num_o() == 0) throw Error("no o node; cobalanced form does not exist");
    DiagramSignature sig = signature(d);
    for (i64 v : sig.n_pairs_x)
        if (v < 0) throw Error("dominance fails: some N(x_i, x_{i+1}) < 0");

    Normalizer nz(d);
    if (d.num_x() == 0) return {nz.d, nz.moves};
    nz.gather();
    if (d.is_affine()) {
        nz.distribute(sig.n_pairs_x);
    } else {
        std::vector<i64> arc_targets(sig.n_pairs_x.begin() + 1, sig.n_pairs_x.end());
        nz.distribute_finite(arc_targets);
    }
    if (full) nz.sweep_rounds();
    return {nz.d, nz.moves};
}

} // namespace

CobalanceResult to_cobalanced(const BowDiagram& d) { return normalize(d, true); }

CobalanceResult to_separated(const BowDiagram& d) { return normalize(d, false); }

BowDiagram balanced_from_signature(const DiagramSignature& s, DiagramKind kind, i64 n, i64 l) {
    bool affine = kind == DiagramKind::Affine;
    std::size_t want_h = st(affine ? l : l + 1);
    std::size_t want_x = st(affine ? n : n + 1);
    if (s.n_pairs_h.size() != want_h || s.n_pairs_x.size() != want_x)
        throw Error("signature list lengths do not match the node counts");

    // Balanced means N_h = 0, so each h pair invariant is the number of x
    // nodes on its arc; that already fixes the node pattern.
    i64 total_x = std::accumulate(s.n_pairs_h.begin(), s.n_pairs_h.end(), i64(0));
    if (total_x != n) throw Error("inconsistent signature: h pair invariants do not sum to n");
    for (i64 v : s.n_pairs_h)
        if (v < 0) throw Error("inconsistent signature: negative x count on an arc");

    std::vector<NodeKind> nodes;
    if (affine) {
        for (i64 p = l - 1; p >= 0; --p) {
            for (i64 k = 0; k < s.n_pairs_h[st(p)]; ++k) nodes.push_back(NodeKind::X);
            nodes.push_back(NodeKind::O);
        }
    } else {
        for (i64 p = l; p >= 0; --p) {
            for (i64 k = 0; k < s.n_pairs_h[st(p)]; ++k) nodes.push_back(NodeKind::X);
            if (p > 0) nodes.push_back(NodeKind::O);
        }
    }

    BowDiagram d;
    d.kind = kind;
    d.nodes = nodes;
    d.dims.assign(nodes.size() + (affine ? 0 : 1), 0);
    d.nu_r.assign(st(l), Rat(0));
    d.nu_c.assign(st(l), Rat(0));

    std::vector<i64> xpos = d.positions(NodeKind::X);
    std::vector<i64> jump(st(n), 0);
    if (affine && n > 0) {
        std::vector<i64> diff(st(n), 0);
        for (i64 i = 0; i < n; ++i) {
            i64 j = (i + 1) % n;
            i64 between = 0;
            i64 p = (xpos[st(i)] + 1) % d.node_count();
            while (p != xpos[st(j)]) {
                if (d.nodes[st(p)] == NodeKind::O) ++between;
                p = (p + 1) % d.node_count();
            }
            diff[st(i)] = s.n_pairs_x[st(i)] - between; // N_{x_i} - N_{x_{i+1}}
        }
        if (std::accumulate(diff.begin(), diff.end(), i64(0)) != 0)
            throw Error("inconsistent signature: x pair invariants do not close up");
        i64 running = 0, sum = 0;
        std::vector<i64> rel(st(n), 0);
        for (i64 i = 1; i < n; ++i) {
            running -= diff[st(i - 1)];
            rel[st(i)] = running;
            sum += running;
        }
        if (sum % n != 0) throw Error("inconsistent signature: x jumps are not integral");
        i64 j0 = -sum / n; // balanced circle forces the jumps to sum to zero
        for (i64 i = 0; i < n; ++i) jump[st(i)] = j0 + rel[st(i)];
    } else if (!affine) {
        for (i64 i = 0; i < n; ++i) {
            i64 between = 0;
            i64 from = i == 0 ? -1 : xpos[st(i - 1)];
            for (i64 p = from + 1; p < xpos[st(i)]; ++p)
                if (d.nodes[st(p)] == NodeKind::O) ++between;
            i64 prev = i == 0 ? 0 : jump[st(i - 1)];
            jump[st(i)] = prev + between - s.n_pairs_x[st(i)];
        }
    }

    // Integrate the jumps to a profile; the free offset is pinned by quad_h
    // (or by quad_x when there is no x at all).
    std::vector<i64> profile(d.dims.size(), 0);
    i64 cur = 0;
    for (i64 p = 0; p < d.node_count(); ++p) {
        profile[st(p)] = cur;
        if (d.nodes[st(p)] == NodeKind::X) cur -= jump[st(d.x_index(p))];
    }
    if (affine) {
        if (n > 0 && cur != 0) throw Error("inconsistent signature: dimension profile does not close up");
    } else {
        profile[st(d.node_count())] = cur;
    }

    if (n == 0) {
        if (l > 0) {
            // all-o diagram: quad_x = 2 l d fixes the constant dimension
            if (s.quad_x % (2 * l) != 0) throw Error("inconsistent signature: quad_x unreachable");
            i64 t = s.quad_x / (2 * l);
            for (i64& v : profile) v = t;
        }
    } else {
        i64 base_quad = 0;
        for (i64 v : jump) base_quad -= v * v;
        for (i64 p = 0; p < d.node_count(); ++p)
            if (d.nodes[st(p)] == NodeKind::X) {
                i64 before = profile[st(p)];
                i64 after = affine ? profile[st((p + 1) % d.node_count())] : profile[st(p + 1)];
                base_quad += before + after;
            }
        i64 delta = s.quad_h - base_quad;
        if (delta % (2 * n) != 0)
            throw Error("inconsistent signature: quad_h is not reachable by a (1,...,1) shift");
        i64 t = delta / (2 * n);
        for (i64& v : profile) v += t;
    }
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i] < 0)
            throw Error("no nonnegative solution: segment " + std::to_string(i) + " would be negative");
        d.dims[i] = profile[i];
    }

    d.validate();
    DiagramSignature got = signature(d);
    if (!(got == s)) throw Error("inconsistent signature: reconstruction mismatch");
    if (!got.balanced) throw Error("internal: reconstruction is not balanced");
    return d;
}

} // namespace bow
