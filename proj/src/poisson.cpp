#include "bow/poisson.hpp"

#include <algorithm>
#include <sstream>

namespace bow {

namespace {
std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

const char* fam_name(GenFamily f) {
    switch (f) {
        case GenFamily::A: return "A";
        case GenFamily::B: return "B";
        case GenFamily::Bp: return "B'";
        case GenFamily::a: return "a";
        case GenFamily::b: return "b";
        case GenFamily::C: return "C";
        case GenFamily::D: return "D";
    }
    return "?";
}
} // namespace

PoissonPoly PoissonPoly::constant(const Rat& c) {
    PoissonPoly p;
    if (c != 0) p.terms[{}] = c;
    return p;
}

PoissonPoly PoissonPoly::gen(Gen g) {
    PoissonPoly p;
    p.terms[{g}] = Rat(1);
    return p;
}

void PoissonPoly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

PoissonPoly PoissonPoly::operator+(const PoissonPoly& o) const {
    PoissonPoly out = *this;
    for (auto& [m, c] : o.terms) out.add_term(m, c);
    return out;
}

PoissonPoly PoissonPoly::operator-(const PoissonPoly& o) const {
    PoissonPoly out = *this;
    for (auto& [m, c] : o.terms) out.add_term(m, -c);
    return out;
}

PoissonPoly PoissonPoly::operator*(const PoissonPoly& o) const {
    PoissonPoly out;
    for (auto& [m1, c1] : terms)
        for (auto& [m2, c2] : o.terms) {
            Monomial m = m1;
            m.insert(m.end(), m2.begin(), m2.end());
            std::sort(m.begin(), m.end());
            out.add_term(m, c1 * c2);
        }
    return out;
}

PoissonPoly PoissonPoly::operator*(const Rat& c) const {
    PoissonPoly out;
    if (c == 0) return out;
    for (auto& [m, k] : terms) out.terms[m] = k * c;
    return out;
}

std::string PoissonPoly::str() const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [m, c] : terms) {
        out << (first ? "" : " + ") << rat_str(c);
        for (const Gen& g : m)
            out << "*" << fam_name(g.family) << "[" << int(g.part) << "](" << int(g.i) << "," << int(g.j) << ")";
        first = false;
    }
    return out.str();
}

std::vector<Gen> BracketTable::generators() const {
    std::vector<Gen> out;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const PartSpec& ps = parts[p];
        auto add = [&](GenFamily f, i64 ni, i64 nj) {
            for (i64 i = 1; i <= ni; ++i)
                for (i64 j = 1; j <= (nj ? nj : 1); ++j)
                    out.push_back(Gen{static_cast<std::uint8_t>(p), f, static_cast<std::uint8_t>(i),
                                      static_cast<std::uint8_t>(nj ? j : 0)});
        };
        if (ps.triangle) {
            add(GenFamily::A, ps.size1, ps.size2);
            add(GenFamily::B, ps.size1, ps.size1);
            add(GenFamily::Bp, ps.size2, ps.size2);
            add(GenFamily::a, ps.size2, 0);
            add(GenFamily::b, ps.size1, 0);
        } else {
            add(GenFamily::C, ps.size1, ps.size2);
            add(GenFamily::D, ps.size2, ps.size1);
        }
    }
    return out;
}

PoissonPoly BracketTable::gen_bracket(Gen x, Gen y) const {
    if (x.part != y.part) return PoissonPoly::zero();
    auto delta = [](int p, int q) { return p == q ? Rat(1) : Rat(0); };
    auto G = [&](GenFamily f, int i, int j) {
        return PoissonPoly::gen(Gen{x.part, f, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)});
    };
    auto Gv = [&](GenFamily f, int i) {
        return PoissonPoly::gen(Gen{x.part, f, static_cast<std::uint8_t>(i), 0});
    };
    const PartSpec& ps = parts[x.part];
    PoissonPoly out;
    bool swapped = false;
    Gen u = x, v = y;
    auto order = [&](GenFamily f1, GenFamily f2) {
        if (u.family == f1 && v.family == f2) return true;
        if (u.family == f2 && v.family == f1) {
            std::swap(u, v);
            swapped = !swapped;
            return true;
        }
        return false;
    };
    if (!ps.triangle) {
        // { C_ij, D_kl } = -delta_il delta_jk
        if (order(GenFamily::C, GenFamily::D))
            out = PoissonPoly::constant(-delta(u.i, v.j) * delta(u.j, v.i));
    } else if (u.family == GenFamily::B && v.family == GenFamily::B) {
        // { B_ij, B_kl } = d_jk B_il - d_li B_kj
        out = G(GenFamily::B, u.i, v.j) * delta(u.j, v.i) - G(GenFamily::B, v.i, u.j) * delta(v.j, u.i);
    } else if (u.family == GenFamily::Bp && v.family == GenFamily::Bp) {
        out = G(GenFamily::Bp, u.i, v.j) * delta(u.j, v.i) - G(GenFamily::Bp, v.i, u.j) * delta(v.j, u.i);
    } else if (order(GenFamily::B, GenFamily::b)) {
        // { B_ij, b_k } = d_jk b_i
        out = Gv(GenFamily::b, u.i) * delta(u.j, v.i);
    } else if (order(GenFamily::Bp, GenFamily::a)) {
        // { B'_ij, a_k } = -d_ki a_j
        out = Gv(GenFamily::a, u.j) * (-delta(v.i, u.i));
    } else if (order(GenFamily::B, GenFamily::A)) {
        // { B_ij, A_kl } = d_jk A_il
        out = G(GenFamily::A, u.i, v.j) * delta(u.j, v.i);
    } else if (order(GenFamily::Bp, GenFamily::A)) {
        // { B'_ij, A_kl } = -d_li A_kj
        out = G(GenFamily::A, v.i, u.j) * (-delta(v.j, u.i));
    } else if (order(GenFamily::b, GenFamily::a)) {
        // { b_i, a_j } = A_ij
        out = G(GenFamily::A, u.i, v.i);
    }
    if (swapped) out = PoissonPoly::zero() - out;
    if (sign < 0) out = PoissonPoly::zero() - out;
    return out;
}

PoissonPoly BracketTable::bracket(const PoissonPoly& p, const PoissonPoly& q) const {
    PoissonPoly out;
    for (auto& [m1, c1] : p.terms)
        for (auto& [m2, c2] : q.terms) {
            for (std::size_t i = 0; i < m1.size(); ++i)
                for (std::size_t j = 0; j < m2.size(); ++j) {
                    PoissonPoly gb = gen_bracket(m1[i], m2[j]);
                    if (gb.is_zero()) continue;
                    Monomial rest;
                    rest.reserve(m1.size() + m2.size() - 2);
                    for (std::size_t k = 0; k < m1.size(); ++k)
                        if (k != i) rest.push_back(m1[k]);
                    for (std::size_t k = 0; k < m2.size(); ++k)
                        if (k != j) rest.push_back(m2[k]);
                    for (auto& [gm, gc] : gb.terms) {
                        Monomial m = rest;
                        m.insert(m.end(), gm.begin(), gm.end());
                        std::sort(m.begin(), m.end());
                        out.add_term(m, c1 * c2 * gc);
                    }
                }
        }
    return out;
}

BracketTable build_table(const PartSpec& part) {
    BracketTable t;
    t.parts.push_back(part);
    return t;
}

BracketTable build_junction_table(i64 v0, i64 v1, i64 v2) {
    BracketTable t;
    t.parts.push_back(PartSpec{false, v0, v1}); // two-way from V0 to V1
    t.parts.push_back(PartSpec{true, v1, v2});  // triangle on V1 -> V2
    return t;
}

PoissonPoly trace_power(const BracketTable& t, std::uint8_t part, GenFamily fam, i64 p) {
    const PartSpec& ps = t.parts[part];
    i64 n = fam == GenFamily::Bp ? ps.size2 : ps.size1;
    // tr X^p = sum over cyclic index tuples of products of entries; with the
    // (j,i)-entry convention the generator chain is X_{i2 i1} X_{i3 i2} ...
    PoissonPoly out;
    std::vector<i64> idx(st(p), 1);
    for (;;) {
        Monomial m;
        for (i64 k = 0; k < p; ++k) {
            i64 row = idx[st(k)], col = idx[st((k + 1) % p)];
            m.push_back(Gen{part, fam, static_cast<std::uint8_t>(col), static_cast<std::uint8_t>(row)});
        }
        std::sort(m.begin(), m.end());
        out.add_term(m, Rat(1));
        i64 k = 0;
        while (k < p) {
            if (++idx[st(k)] <= n) break;
            idx[st(k)] = 1;
            ++k;
        }
        if (k == p) break;
    }
    return out;
}

PoissonPoly mu_entry(const BracketTable& t, std::uint8_t part, i64 i, i64 j) {
    const PartSpec& ps = t.parts[part];
    if (!ps.triangle) throw Error("mu is defined on triangle parts");
    auto G = [&](GenFamily f, i64 a, i64 b) {
        return PoissonPoly::gen(Gen{part, f, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
    };
    PoissonPoly out;
    for (i64 m = 1; m <= ps.size2; ++m) out = out + G(GenFamily::Bp, m, j) * G(GenFamily::A, i, m);
    for (i64 m = 1; m <= ps.size1; ++m) out = out + G(GenFamily::A, m, j) * G(GenFamily::B, i, m);
    out = out + PoissonPoly::gen(Gen{part, GenFamily::a, static_cast<std::uint8_t>(j), 0}) *
                    PoissonPoly::gen(Gen{part, GenFamily::b, static_cast<std::uint8_t>(i), 0});
    return out;
}

std::vector<IdentityReport> verify_identities(i64 v1, i64 v2, i64 max_pow) {
    std::vector<IdentityReport> out;
    BracketTable tri = build_table(PartSpec{true, v1, v2});
    auto G = [&](GenFamily f, i64 i, i64 j) {
        return PoissonPoly::gen(Gen{0, f, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)});
    };
    auto Gv = [&](GenFamily f, i64 i) { return PoissonPoly::gen(Gen{0, f, static_cast<std::uint8_t>(i), 0}); };

    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out.push_back(IdentityReport{name, ok, detail});
    };

    // Poisson ideal: {mu_ij, B_kl} = -d_il mu_kj, {mu_ij, B'_kl} = d_jk mu_il,
    // {mu_ij, A_kl} = 0, {mu_ij, a_k} = 0 = {mu_ij, b_k}
    {
        bool okB = true, okBp = true, okA = true, okab = true;
        std::string detail;
        for (i64 i = 1; i <= v1 && okB; ++i)
            for (i64 j = 1; j <= v2 && okB; ++j) {
                PoissonPoly mu = mu_entry(tri, 0, i, j);
                for (i64 k = 1; k <= v1; ++k)
                    for (i64 l = 1; l <= v1; ++l) {
                        PoissonPoly lhs = tri.bracket(mu, G(GenFamily::B, k, l));
                        PoissonPoly rhs = i == l ? PoissonPoly::zero() - mu_entry(tri, 0, k, j) : PoissonPoly::zero();
                        if (!(lhs == rhs)) {
                            okB = false;
                            detail = "{mu_" + std::to_string(i) + std::to_string(j) + ", B_" + std::to_string(k) +
                                     std::to_string(l) + "}";
                        }
                    }
            }
        report("poisson-ideal {mu,B}", okB, detail);
        for (i64 i = 1; i <= v1 && okBp; ++i)
            for (i64 j = 1; j <= v2 && okBp; ++j) {
                PoissonPoly mu = mu_entry(tri, 0, i, j);
                for (i64 k = 1; k <= v2; ++k)
                    for (i64 l = 1; l <= v2; ++l) {
                        PoissonPoly lhs = tri.bracket(mu, G(GenFamily::Bp, k, l));
                        PoissonPoly rhs = j == k ? mu_entry(tri, 0, i, l) : PoissonPoly::zero();
                        if (!(lhs == rhs)) okBp = false;
                    }
            }
        report("poisson-ideal {mu,B'}", okBp);
        for (i64 i = 1; i <= v1 && okA; ++i)
            for (i64 j = 1; j <= v2 && okA; ++j) {
                PoissonPoly mu = mu_entry(tri, 0, i, j);
                for (i64 k = 1; k <= v1; ++k)
                    for (i64 l = 1; l <= v2; ++l)
                        if (!tri.bracket(mu, G(GenFamily::A, k, l)).is_zero()) okA = false;
            }
        report("poisson-ideal {mu,A}=0", okA);
        for (i64 i = 1; i <= v1 && okab; ++i)
            for (i64 j = 1; j <= v2 && okab; ++j) {
                PoissonPoly mu = mu_entry(tri, 0, i, j);
                for (i64 k = 1; k <= v2; ++k)
                    if (!tri.bracket(mu, Gv(GenFamily::a, k)).is_zero()) okab = false;
                for (i64 k = 1; k <= v1; ++k)
                    if (!tri.bracket(mu, Gv(GenFamily::b, k)).is_zero()) okab = false;
            }
        report("poisson-ideal {mu,a}={mu,b}=0", okab);
    }

    // trace commutativity
    {
        bool ok = true;
        for (i64 p = 1; p <= max_pow && ok; ++p)
            for (i64 q = 1; q <= max_pow && ok; ++q) {
                if (!tri.bracket(trace_power(tri, 0, GenFamily::B, p), trace_power(tri, 0, GenFamily::Bp, q))
                         .is_zero())
                    ok = false;
                if (!tri.bracket(trace_power(tri, 0, GenFamily::B, p), trace_power(tri, 0, GenFamily::B, q))
                         .is_zero())
                    ok = false;
                if (!tri.bracket(trace_power(tri, 0, GenFamily::Bp, p), trace_power(tri, 0, GenFamily::Bp, q))
                         .is_zero())
                    ok = false;
            }
        report("trace commutativity {tr B^p, tr B^q} = {tr B^p, tr B'^q} = 0", ok);
    }

    // junction compatibility: {B_ij - sum_m C_mj D_im, sum_n A_nl C_kn} = 0
    {
        BracketTable jt = build_junction_table(v1, v1, v2);
        bool ok = true;
        auto GJ = [&](std::uint8_t part, GenFamily f, i64 i, i64 j) {
            return PoissonPoly::gen(Gen{part, f, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)});
        };
        for (i64 i = 1; i <= v1 && ok; ++i)
            for (i64 j = 1; j <= v1 && ok; ++j) {
                PoissonPoly lhs = GJ(1, GenFamily::B, i, j);
                for (i64 m = 1; m <= v1; ++m)
                    lhs = lhs - GJ(0, GenFamily::C, m, j) * GJ(0, GenFamily::D, i, m);
                for (i64 k = 1; k <= v1 && ok; ++k)
                    for (i64 l = 1; l <= v2 && ok; ++l) {
                        PoissonPoly rhs;
                        for (i64 n2 = 1; n2 <= v1; ++n2)
                            rhs = rhs + GJ(1, GenFamily::A, n2, l) * GJ(0, GenFamily::C, k, n2);
                        if (!jt.bracket(lhs, rhs).is_zero()) ok = false;
                    }
            }
        report("junction compatibility {B - CD, AC} = 0", ok);
    }

    // Jacobi on all generator triples, triangle and two-way tables
    {
        bool ok = true;
        auto jacobi_all = [&](const BracketTable& t) {
            std::vector<Gen> gens = t.generators();
            for (std::size_t x = 0; x < gens.size() && ok; ++x)
                for (std::size_t y = x; y < gens.size() && ok; ++y)
                    for (std::size_t z = y; z < gens.size() && ok; ++z) {
                        PoissonPoly px = PoissonPoly::gen(gens[x]);
                        PoissonPoly py = PoissonPoly::gen(gens[y]);
                        PoissonPoly pz = PoissonPoly::gen(gens[z]);
                        PoissonPoly sum = t.bracket(px, t.bracket(py, pz)) + t.bracket(py, t.bracket(pz, px)) +
                                          t.bracket(pz, t.bracket(px, py));
                        if (!sum.is_zero()) ok = false;
                    }
        };
        jacobi_all(tri);
        jacobi_all(build_table(PartSpec{false, v1, v2}));
        report("Jacobi on all generator triples", ok);
    }

    return out;
}

} // namespace bow
