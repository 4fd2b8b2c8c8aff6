#include "bow/weights.hpp"

#include <numeric>
#include <sstream>

namespace bow {

namespace {
std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

i64 ceil_div(i64 a, i64 b) {
    // b > 0
    i64 q = a / b, r = a % b;
    return q + (r > 0 ? 1 : 0);
}
} // namespace

void GenYoungDiagram::validate() const {
    if (level < 0) throw Error("negative level");
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i - 1] < entries[i]) throw Error("entries not weakly decreasing");
    if (!entries.empty() && entries.front() - entries.back() > level)
        throw Error("level constraint violated");
}

i64 AffineWeight::charge() const { return std::accumulate(vec.begin(), vec.end(), i64(0)); }

bool AffineWeight::dominant() const {
    for (std::size_t i = 1; i < vec.size(); ++i)
        if (vec[i - 1] < vec[i]) return false;
    if (!vec.empty() && vec.front() - vec.back() > level) return false;
    return true;
}

i64 GaugeData::n() const {
    return static_cast<i64>(v.size()) + (kind == DiagramKind::Affine ? 0 : 1);
}

void GaugeData::validate() const {
    if (v.size() != w.size()) throw Error("gauge data length mismatch");
    for (i64 x : v)
        if (x < 0) throw Error("negative v entry");
    for (i64 x : w)
        if (x < 0) throw Error("negative w entry");
    if (kind == DiagramKind::Finite && v.empty()) throw Error("finite gauge data needs n >= 2");
}

std::vector<i64> u_vector(const GaugeData& g) {
    g.validate();
    std::vector<i64> u(g.v.size(), 0);
    i64 m = static_cast<i64>(g.v.size());
    auto vat = [&](i64 i) -> i64 {
        if (g.kind == DiagramKind::Affine) return g.v[st(((i % m) + m) % m)];
        // finite: v_0 = v_n = 0, entries are v_1..v_{n-1} at index i-1
        if (i <= 0 || i > m) return 0;
        return g.v[st(i - 1)];
    };
    for (i64 i = 0; i < m; ++i) {
        i64 idx = g.kind == DiagramKind::Affine ? i : i + 1;
        u[st(i)] = g.w[st(i)] + vat(idx - 1) + vat(idx + 1) - 2 * vat(idx);
    }
    return u;
}

std::pair<AffineWeight, AffineWeight> weights_from_gauge(const GaugeData& g) {
    g.validate();
    std::vector<i64> u = u_vector(g);
    i64 n = g.n();
    i64 level = std::accumulate(g.w.begin(), g.w.end(), i64(0));
    AffineWeight lambda, mu;
    lambda.level = mu.level = level;
    lambda.vec.assign(st(n), 0);
    mu.vec.assign(st(n), 0);
    if (g.kind == DiagramKind::Finite) {
        // lambda_i = sum_{j>=i} w_j, mu_i = v_{n-1} + sum_{j>=i} u_j
        i64 vlast = g.v.empty() ? 0 : g.v.back();
        i64 ws = 0, us = 0;
        for (i64 i = n - 1; i >= 1; --i) {
            ws += g.w[st(i - 1)];
            us += u[st(i - 1)];
            lambda.vec[st(i - 1)] = ws;
            mu.vec[st(i - 1)] = vlast + us;
        }
        lambda.vec[st(n - 1)] = 0;
        mu.vec[st(n - 1)] = vlast;
        lambda.d_deg = 0;
        mu.d_deg = 0;
    } else {
        // affine: same formulas with the wrap charge v_{n-1} - v_0, and the
        // d-degrees v_0 and 0
        i64 vdiff = g.v[st(n - 1)] - g.v[0];
        i64 ws = 0, us = 0;
        for (i64 i = n - 1; i >= 1; --i) {
            ws += g.w[st(i)];
            us += u[st(i)];
            lambda.vec[st(i - 1)] = ws;
            mu.vec[st(i - 1)] = vdiff + us;
        }
        lambda.vec[st(n - 1)] = 0;
        mu.vec[st(n - 1)] = vdiff;
        lambda.d_deg = g.v[0];
        mu.d_deg = 0;
    }
    return {lambda, mu};
}

GaugeData gauge_from_weights(const AffineWeight& lambda_in, const AffineWeight& mu_in, DiagramKind kind) {
    // gauge data only sees d-degree differences; normalize mu's to zero
    AffineWeight lambda = lambda_in, mu = mu_in;
    lambda.d_deg -= mu_in.d_deg;
    mu.d_deg = 0;
    if (lambda.n() != mu.n()) throw Error("weight lengths differ");
    if (lambda.level != mu.level) throw Error("weight levels differ");
    if (lambda.charge() != mu.charge()) throw Error("weight charges differ");
    if (!lambda.dominant()) throw Error("lambda is not dominant");
    i64 n = lambda.n();
    GaugeData g;
    g.kind = kind;
    if (kind == DiagramKind::Finite) {
        if (lambda.d_deg != 0) throw Error("finite weights carry no d-degree");
        g.v.assign(st(n - 1), 0);
        g.w.assign(st(n - 1), 0);
        i64 ps = 0;
        for (i64 i = 1; i < n; ++i) {
            ps += lambda.vec[st(i - 1)] - mu.vec[st(i - 1)];
            if (ps < 0) throw Error("negative v: mu is not below lambda");
            g.v[st(i - 1)] = ps;
            i64 wi = lambda.vec[st(i - 1)] - lambda.vec[st(i)];
            if (wi < 0) throw Error("negative w entry");
            g.w[st(i - 1)] = wi;
        }
    } else {
        i64 v0 = lambda.d_deg - mu.d_deg;
        if (v0 < 0) throw Error("negative v_0: d-degree of mu above lambda");
        g.v.assign(st(n), 0);
        g.w.assign(st(n), 0);
        g.v[0] = v0;
        i64 ps = v0;
        for (i64 i = 1; i < n; ++i) {
            ps += lambda.vec[st(i - 1)] - mu.vec[st(i - 1)];
            if (ps < 0) throw Error("negative v: mu is not below lambda");
            g.v[st(i)] = ps;
            i64 wi = lambda.vec[st(i - 1)] - lambda.vec[st(i)];
            if (wi < 0) throw Error("negative w entry");
            g.w[st(i)] = wi;
        }
        i64 w0 = lambda.level - (lambda.vec[0] - lambda.vec[st(n - 1)]);
        if (w0 < 0) throw Error("negative w_0: level constraint violated");
        g.w[0] = w0;
    }
    // round-trip sanity: the partial sums must close up
    auto [l2, m2] = weights_from_gauge(g);
    if (!(l2 == lambda) || !(m2 == mu)) throw Error("weights are not realized by gauge data");
    return g;
}

bool dominance_leq(const AffineWeight& mu, const AffineWeight& lambda) {
    if (lambda.n() != mu.n()) throw Error("incomparable: lengths differ");
    if (lambda.level != mu.level) throw Error("incomparable: levels differ");
    if (lambda.charge() != mu.charge()) throw Error("incomparable: charges differ");
    i64 dd = lambda.d_deg - mu.d_deg;
    if (dd < 0) return false;
    i64 sl = 0, sm = 0;
    for (i64 i = 0; i < lambda.n(); ++i) {
        sl += lambda.vec[st(i)];
        sm += mu.vec[st(i)];
        if (sl + dd < sm) return false;
    }
    return true;
}

GenYoungDiagram transpose_gyd(const GenYoungDiagram& g) {
    g.validate();
    if (g.level == 0) throw Error("transpose needs level >= 1");
    i64 n = static_cast<i64>(g.entries.size());
    if (n == 0) throw Error("transpose of empty diagram");
    GenYoungDiagram t;
    t.level = n;
    t.entries.assign(st(g.level), 0);
    for (i64 p = 1; p <= g.level; ++p) {
        i64 acc = 0;
        for (i64 i = 0; i < n; ++i) acc += ceil_div(g.entries[st(i)] - p + 1, g.level);
        t.entries[st(p - 1)] = acc;
    }
    t.validate();
    return t;
}

GaugeData mirror_gauge(const GaugeData& g) {
    g.validate();
    if (g.kind != DiagramKind::Affine) throw Error("mirror_gauge expects affine gauge data");
    i64 level = std::accumulate(g.w.begin(), g.w.end(), i64(0));
    if (level <= 0) throw Error("mirror_gauge needs level > 0");
    for (i64 ui : u_vector(g))
        if (ui < 0) throw Error("mirror_gauge needs dominant mu (u = w - Cv >= 0)");
    auto [lambda, mu] = weights_from_gauge(g);
    i64 n = g.n();

    GenYoungDiagram lgy{lambda.vec, level}, mgy{mu.vec, level};
    GenYoungDiagram tl = transpose_gyd(lgy);
    GenYoungDiagram tm = transpose_gyd(mgy);

    // (lambda', mu') = (t mu, t lambda), both level n with l entries
    AffineWeight lp{tm.entries, 0, n};
    AffineWeight mp{tl.entries, 0, n};
    if (lp.charge() != mp.charge()) throw Error("internal: transpose changed the charge");

    // w' from consecutive differences of t(mu), with the level-n wrap.
    GaugeData out;
    out.kind = DiagramKind::Affine;
    out.w.assign(st(level), 0);
    for (i64 p = 1; p < level; ++p) {
        i64 wp = lp.vec[st(p - 1)] - lp.vec[st(p)];
        if (wp < 0) throw Error("internal: t(mu) not weakly decreasing");
        out.w[st(p)] = wp;
    }
    out.w[0] = n - (lp.vec[0] - lp.vec[st(level - 1)]);
    if (out.w[0] < 0) throw Error("internal: level-n constraint violated");

    // v'_p = v'_0 + partial sums of lambda' - mu'; solve v'_0 from the
    // dimension identity (linear with slope 2n).
    std::vector<i64> rel(st(level), 0);
    i64 ps = 0;
    for (i64 p = 1; p < level; ++p) {
        ps += lp.vec[st(p - 1)] - mp.vec[st(p - 1)];
        rel[st(p)] = ps;
    }
    i64 lhs = 0;
    for (i64 x : g.v) lhs += 2 * x;
    // rhs(v0') = sum_p [2 (v0'+rel_p) w'_p - (rel_p - rel_{p-1})^2] = base + 2n v0'
    i64 base = 0;
    for (i64 p = 0; p < level; ++p) {
        i64 prev = rel[st((p - 1 + level) % level)];
        base += 2 * rel[st(p)] * out.w[st(p)] - (rel[st(p)] - prev) * (rel[st(p)] - prev);
    }
    i64 delta = lhs - base;
    if (delta % (2 * n) != 0) throw Error("no integral v' satisfies the dimension identity");
    i64 v0 = delta / (2 * n);
    out.v.assign(st(level), 0);
    for (i64 p = 0; p < level; ++p) {
        i64 vp = v0 + rel[st(p)];
        if (vp < 0) throw Error("no nonnegative v' satisfies the dimension identity");
        out.v[st(p)] = vp;
    }
    out.validate();
    return out;
}

Gradings gradings(const GaugeData& g, i64 i) {
    g.validate();
    if (g.kind != DiagramKind::Affine) throw Error("gradings expects affine gauge data");
    i64 n = g.n();
    if (n < 2) throw Error("monopole degree formula needs n >= 2");
    if (i < 0 || i >= n) throw Error("node index out of range");
    i64 prev = g.v[st((i - 1 + n) % n)];
    i64 next = g.v[st((i + 1) % n)];
    return Gradings{next + prev + g.w[st(i)], i, 2};
}

BowDiagram gauge_to_diagram(const GaugeData& g) {
    g.validate();
    BowDiagram d;
    d.kind = g.kind;
    if (g.kind == DiagramKind::Affine) {
        i64 n = g.n();
        for (i64 i = 0; i < n; ++i) {
            d.nodes.push_back(NodeKind::X);
            d.dims.push_back(g.v[st((i - 1 + n) % n)]); // segment before x_i
            for (i64 k = 0; k < g.w[st(i)]; ++k) {
                d.nodes.push_back(NodeKind::O);
                d.dims.push_back(g.v[st(i)]);
            }
        }
    } else {
        i64 n = g.n();
        d.dims.push_back(0);
        d.nodes.push_back(NodeKind::X);
        for (i64 i = 1; i < n; ++i) {
            for (i64 k = 0; k < g.w[st(i - 1)]; ++k) {
                d.dims.push_back(g.v[st(i - 1)]);
                d.nodes.push_back(NodeKind::O);
            }
            d.dims.push_back(g.v[st(i - 1)]);
            d.nodes.push_back(NodeKind::X);
        }
        d.dims.push_back(0);
    }
    std::size_t l = st(d.num_o());
    d.nu_r.assign(l, Rat(0));
    d.nu_c.assign(l, Rat(0));
    d.validate();
    return d;
}

GaugeData diagram_to_gauge(const BowDiagram& d) {
    d.validate();
    DiagramSignature s = signature(d);
    if (!s.balanced) throw Error("diagram is not balanced; gauge data undefined");
    GaugeData g;
    g.kind = d.kind;
    std::vector<i64> xs = d.positions(NodeKind::X);
    i64 n = static_cast<i64>(xs.size());
    if (d.is_affine()) {
        if (n == 0) throw Error("no x node; gauge data undefined");
        g.v.assign(st(n), 0);
        g.w.assign(st(n), 0);
        for (i64 i = 0; i < n; ++i) {
            i64 from = xs[st(i)];
            i64 to = xs[st((i + 1) % n)];
            g.v[st(i)] = d.dim_after(from);
            i64 cnt = 0;
            i64 p = (from + 1) % d.node_count();
            while (p != to) {
                if (d.nodes[st(p)] == NodeKind::O) ++cnt;
                p = (p + 1) % d.node_count();
            }
            if (n == 1) cnt = d.num_o();
            g.w[st(i)] = cnt;
        }
    } else {
        if (n < 2) throw Error("finite gauge data needs at least two x nodes");
        if (d.dims.front() != 0 || d.dims.back() != 0)
            throw Error("finite gauge diagram must have zero outer dimensions");
        if (xs.front() != 0 || xs.back() != d.node_count() - 1)
            throw Error("finite gauge diagram must start and end with x");
        g.v.assign(st(n - 1), 0);
        g.w.assign(st(n - 1), 0);
        for (i64 i = 0; i + 1 < n; ++i) {
            g.v[st(i)] = d.dim_after(xs[st(i)]);
            i64 cnt = 0;
            for (i64 p = xs[st(i)] + 1; p < xs[st(i + 1)]; ++p)
                if (d.nodes[st(p)] == NodeKind::O) ++cnt;
            g.w[st(i)] = cnt;
        }
    }
    g.validate();
    return g;
}

std::string weight_str(const AffineWeight& w) {
    std::ostringstream out;
    out << "vec=[";
    for (std::size_t i = 0; i < w.vec.size(); ++i) out << (i ? "," : "") << w.vec[i];
    out << "] d=" << w.d_deg << " level=" << w.level;
    return out.str();
}

GaugeData parse_gauge(const std::string& text, DiagramKind kind) {
    std::string body = text;
    if (!body.empty() && body.front() == '(') body.erase(body.begin());
    if (!body.empty() && body.back() == ')') body.pop_back();
    std::size_t semi = body.find(';');
    if (semi == std::string::npos) throw Error("gauge data must look like (v0,..;w0,..)");
    auto parse_list = [](const std::string& s) {
        std::vector<i64> out;
        std::string tok;
        std::istringstream in(s);
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) throw Error("empty entry in gauge data");
            Rat r = parse_rat(tok);
            if (!is_integer(r)) throw Error("gauge data entries must be integers");
            out.push_back(to_i64(r.get_num()));
        }
        return out;
    };
    GaugeData g;
    g.kind = kind;
    g.v = parse_list(body.substr(0, semi));
    g.w = parse_list(body.substr(semi + 1));
    g.validate();
    return g;
}

} // namespace bow
