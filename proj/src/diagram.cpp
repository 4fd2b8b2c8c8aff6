#include "bow/diagram.hpp"

#include <sstream>

namespace bow {

i64 BowDiagram::count(NodeKind k) const {
    i64 c = 0;
    for (NodeKind n : nodes)
        if (n == k) ++c;
    return c;
}

i64 BowDiagram::dim_before(i64 i) const {
    return dims[static_cast<std::size_t>(i)];
}

i64 BowDiagram::dim_after(i64 i) const {
    if (is_affine()) return dims[static_cast<std::size_t>((i + 1) % node_count())];
    return dims[static_cast<std::size_t>(i + 1)];
}

std::vector<i64> BowDiagram::positions(NodeKind k) const {
    std::vector<i64> out;
    for (i64 i = 0; i < node_count(); ++i)
        if (nodes[static_cast<std::size_t>(i)] == k) out.push_back(i);
    return out;
}

i64 BowDiagram::o_index(i64 pos) const {
    i64 idx = 0;
    for (i64 i = 0; i < pos; ++i)
        if (nodes[static_cast<std::size_t>(i)] == NodeKind::O) ++idx;
    return idx;
}

i64 BowDiagram::x_index(i64 pos) const {
    i64 idx = 0;
    for (i64 i = 0; i < pos; ++i)
        if (nodes[static_cast<std::size_t>(i)] == NodeKind::X) ++idx;
    return idx;
}

void BowDiagram::validate() const {
    std::size_t want = nodes.size() + (is_affine() ? 0 : 1);
    if (dims.size() != want) throw Error("segment count does not match node count");
    for (i64 d : dims)
        if (d < 0) throw Error("negative dimension");
    std::size_t l = static_cast<std::size_t>(num_o());
    if (nu_r.size() != l) throw Error("nu_r length mismatch");
    if (nu_c.size() != l) throw Error("nu_c length mismatch");
}

BowDiagram parse_diagram(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    BowDiagram d;
    bool have_main = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "affine:" || tok == "finite:") {
            if (have_main) throw Error("duplicate diagram record");
            have_main = true;
            d.kind = tok == "affine:" ? DiagramKind::Affine : DiagramKind::Finite;
            bool expect_dim = true;
            std::string t;
            while (ls >> t) {
                if (expect_dim) {
                    Rat r = parse_rat(t);
                    if (!is_integer(r)) throw Error("malformed token '" + t + "'");
                    i64 v = to_i64(r.get_num());
                    if (v < 0) throw Error("negative dimension");
                    d.dims.push_back(v);
                } else {
                    if (t == "x")
                        d.nodes.push_back(NodeKind::X);
                    else if (t == "o")
                        d.nodes.push_back(NodeKind::O);
                    else
                        throw Error("malformed token '" + t + "'");
                }
                expect_dim = !expect_dim;
            }
            if (d.kind == DiagramKind::Affine) {
                if (!d.nodes.empty() && d.dims.size() != d.nodes.size())
                    throw Error("affine record must end with a node");
            } else {
                if (d.dims.size() != d.nodes.size() + 1)
                    throw Error("finite record must end with a dimension");
            }
        } else if (tok == "nu_r:" || tok == "nu_c:") {
            std::vector<Rat>& dst = tok == "nu_r:" ? d.nu_r : d.nu_c;
            if (!dst.empty()) throw Error("duplicate " + tok.substr(0, 4) + " record");
            std::string t;
            while (ls >> t) dst.push_back(parse_rat(t));
        } else if (tok == "nu_star:") {
            std::string t;
            if (!(ls >> t)) throw Error("nu_star needs a value");
            d.nu_star = parse_rat(t);
            if (ls >> t) throw Error("trailing token after nu_star");
        } else {
            throw Error("malformed token '" + tok + "'");
        }
    }
    if (!have_main) throw Error("missing diagram record");
    std::size_t l = static_cast<std::size_t>(d.num_o());
    if (d.nu_r.empty()) d.nu_r.assign(l, Rat(0));
    if (d.nu_c.empty()) d.nu_c.assign(l, Rat(0));
    d.validate();
    return d;
}

std::string serialize_diagram(const BowDiagram& d) {
    std::ostringstream out;
    out << (d.is_affine() ? "affine:" : "finite:");
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        out << ' ' << d.dims[i] << ' ' << (d.nodes[i] == NodeKind::X ? 'x' : 'o');
    }
    if (!d.is_affine())
        out << ' ' << d.dims.back();
    else if (d.nodes.empty() && !d.dims.empty())
        throw Error("affine diagram with segments but no nodes");
    auto all_zero = [](const std::vector<Rat>& v) {
        for (const Rat& r : v)
            if (r != 0) return false;
        return true;
    };
    auto emit = [&](const char* name, const std::vector<Rat>& v) {
        out << '\n' << name << ':';
        for (const Rat& r : v) out << ' ' << rat_str(r);
    };
    if (!all_zero(d.nu_r)) emit("nu_r", d.nu_r);
    if (!all_zero(d.nu_c)) emit("nu_c", d.nu_c);
    if (d.nu_star != 0) out << "\nnu_star: " << rat_str(d.nu_star);
    return out.str();
}

std::vector<i64> node_jumps(const BowDiagram& d, NodeKind k) {
    std::vector<i64> out;
    for (i64 i = 0; i < d.node_count(); ++i) {
        if (d.nodes[static_cast<std::size_t>(i)] != k) continue;
        if (k == NodeKind::O)
            out.push_back(d.dim_after(i) - d.dim_before(i)); // N_h = v_in - v_out
        else
            out.push_back(d.dim_before(i) - d.dim_after(i)); // N_x = v_before - v_after
    }
    return out;
}

namespace {

// Strictly-between node count of kind `what` on the anticlockwise arc
// from position a to position b. For affine diagrams with a == b the arc is
// the full circle. Finite diagrams may use the phantom boundaries -1 and n.
i64 count_between(const BowDiagram& d, i64 a, i64 b, NodeKind what) {
    i64 n = d.node_count(), c = 0;
    if (d.is_affine()) {
        i64 p = (a + 1) % n;
        while (p != b) {
            if (d.nodes[static_cast<std::size_t>(p)] == what) ++c;
            p = (p + 1) % n;
        }
    } else {
        for (i64 p = a + 1; p < b; ++p)
            if (p >= 0 && p < n && d.nodes[static_cast<std::size_t>(p)] == what) ++c;
    }
    return c;
}

// Pair invariants N(own_i, own_{i+1}). x nodes are numbered anticlockwise
// (serialized order), h nodes clockwise (reverse serialized order); either
// way the arc of a consecutive pair runs anticlockwise from the earlier
// endpoint of the arc and contains no further node of the same kind.
// Finite diagrams get phantom boundary nodes with N = 0 at both ends, so
// their lists have one extra entry.
std::vector<i64> pair_invariants(const BowDiagram& d, NodeKind own) {
    NodeKind other = own == NodeKind::X ? NodeKind::O : NodeKind::X;
    std::vector<i64> pos = d.positions(own);
    std::vector<i64> jumps = node_jumps(d, own);
    i64 m = static_cast<i64>(pos.size());
    std::vector<i64> out;
    bool clockwise = own == NodeKind::O;
    if (d.is_affine()) {
        for (i64 p = 0; p < m; ++p) {
            i64 icur, inext; // serialized indices of own_p and own_{p+1}
            if (!clockwise) {
                icur = p;
                inext = (p + 1) % m;
            } else {
                icur = (m - 1 - p % m + m) % m;
                inext = (icur - 1 + m) % m;
            }
            i64 from = clockwise ? pos[static_cast<std::size_t>(inext)] : pos[static_cast<std::size_t>(icur)];
            i64 to = clockwise ? pos[static_cast<std::size_t>(icur)] : pos[static_cast<std::size_t>(inext)];
            out.push_back(jumps[static_cast<std::size_t>(icur)] - jumps[static_cast<std::size_t>(inext)] +
                          count_between(d, from, to, other));
        }
    } else {
        i64 left_phantom = -1, right_phantom = d.node_count();
        i64 prev_pos = clockwise ? right_phantom : left_phantom;
        i64 prev_jump = 0;
        for (i64 i = 0; i <= m; ++i) {
            i64 cur_pos, cur_jump;
            if (i < m) {
                i64 idx = clockwise ? m - 1 - i : i;
                cur_pos = pos[static_cast<std::size_t>(idx)];
                cur_jump = jumps[static_cast<std::size_t>(idx)];
            } else {
                cur_pos = clockwise ? left_phantom : right_phantom;
                cur_jump = 0;
            }
            i64 from = clockwise ? cur_pos : prev_pos;
            i64 to = clockwise ? prev_pos : cur_pos;
            out.push_back(prev_jump - cur_jump + count_between(d, from, to, other));
            prev_pos = cur_pos;
            prev_jump = cur_jump;
        }
    }
    return out;
}

} // namespace

DiagramSignature signature(const BowDiagram& d) {
    d.validate();
    DiagramSignature s;
    std::vector<i64> nh = node_jumps(d, NodeKind::O);
    std::vector<i64> nx = node_jumps(d, NodeKind::X);
    s.balanced = true;
    for (i64 v : nh)
        if (v != 0) s.balanced = false;
    s.cobalanced = true;
    for (i64 v : nx)
        if (v != 0) s.cobalanced = false;

    s.quad_h = 0;
    for (i64 v : nh) s.quad_h -= v * v;
    s.quad_x = 0;
    for (i64 v : nx) s.quad_x -= v * v;
    for (i64 i = 0; i < d.node_count(); ++i) {
        i64 around = d.dim_before(i) + d.dim_after(i);
        if (d.nodes[static_cast<std::size_t>(i)] == NodeKind::X)
            s.quad_h += around;
        else
            s.quad_x += around;
    }

    s.n_pairs_h = pair_invariants(d, NodeKind::O);
    s.n_pairs_x = pair_invariants(d, NodeKind::X);

    // expected_dim = dim M - dim N - dim G, all combinatorial
    i64 dim = 0;
    for (i64 i = 0; i < d.node_count(); ++i) {
        i64 b = d.dim_before(i), a = d.dim_after(i);
        if (d.nodes[static_cast<std::size_t>(i)] == NodeKind::X)
            dim += b * b + a * a + b + a;
        else
            dim += 2 * b * a;
    }
    for (i64 v : d.dims) dim -= 2 * v * v;
    s.expected_dim = dim;
    return s;
}

BowDiagram mirror_diagram(const BowDiagram& d) {
    d.validate();
    BowDiagram m = d;
    for (NodeKind& n : m.nodes) n = n == NodeKind::X ? NodeKind::O : NodeKind::X;
    std::size_t l = static_cast<std::size_t>(m.num_o());
    m.nu_r.assign(l, Rat(0));
    m.nu_c.assign(l, Rat(0));
    m.nu_star = Rat(0);
    return m;
}

} // namespace bow
