#include "bow/repio.hpp"

#include <algorithm>
#include <sstream>

namespace bow {

namespace {

std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

void emit_matrix(std::ostream& out, const char* name, const MatQ& M) {
    out << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
    for (i64 i = 0; i < M.rows(); ++i) {
        for (i64 j = 0; j < M.cols(); ++j) out << (j ? " " : "") << rat_str(M(i, j));
        out << '\n';
    }
}

MatQ read_matrix(std::istream& in, const std::string& want) {
    std::string name;
    i64 r, c;
    if (!(in >> name >> r >> c) || name != want) throw Error("expected matrix block '" + want + "'");
    if (r < 0 || c < 0) throw Error("negative matrix shape");
    MatQ M(r, c);
    std::string tok;
    for (i64 i = 0; i < r; ++i)
        for (i64 j = 0; j < c; ++j) {
            if (!(in >> tok)) throw Error("truncated matrix block '" + want + "'");
            M(i, j) = parse_rat(tok);
        }
    return M;
}

} // namespace

std::string serialize_rep(const BowRep& r) {
    r.validate_shapes();
    std::ostringstream out;
    out << "bowrep 1\n";
    out << serialize_diagram(r.diagram) << '\n';
    out << "parts\n";
    for (std::size_t i = 0; i < r.triangles.size(); ++i) {
        out << "triangle " << i << '\n';
        emit_matrix(out, "A", r.triangles[i].A);
        emit_matrix(out, "Bsrc", r.triangles[i].B_src);
        emit_matrix(out, "Btgt", r.triangles[i].B_tgt);
        emit_matrix(out, "a", r.triangles[i].a);
        emit_matrix(out, "b", r.triangles[i].b);
    }
    for (std::size_t i = 0; i < r.twoways.size(); ++i) {
        out << "twoway " << i << '\n';
        emit_matrix(out, "C", r.twoways[i].C);
        emit_matrix(out, "D", r.twoways[i].D);
    }
    out << "end\n";
    return out.str();
}

BowRep parse_rep(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty rep file");
    {
        std::istringstream hs(line);
        std::string magic;
        int version = 0;
        if (!(hs >> magic >> version) || magic != "bowrep" || version != 1)
            throw Error("not a bowrep file");
    }
    std::ostringstream diag_text;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "parts") break;
        if (!first.empty()) diag_text << line << '\n';
    }
    BowRep r;
    r.diagram = parse_diagram(diag_text.str());
    r.triangles.resize(st(r.diagram.num_x()));
    r.twoways.resize(st(r.diagram.num_o()));
    std::vector<bool> seen_t(r.triangles.size(), false), seen_o(r.twoways.size(), false);
    std::string kind;
    while (in >> kind) {
        if (kind == "end") break;
        i64 idx;
        if (!(in >> idx)) throw Error("part index missing");
        if (kind == "triangle") {
            if (idx < 0 || idx >= static_cast<i64>(r.triangles.size())) throw Error("triangle index out of range");
            TriangleData t;
            t.A = read_matrix(in, "A");
            t.B_src = read_matrix(in, "Bsrc");
            t.B_tgt = read_matrix(in, "Btgt");
            t.a = read_matrix(in, "a");
            t.b = read_matrix(in, "b");
            r.triangles[st(idx)] = std::move(t);
            seen_t[st(idx)] = true;
        } else if (kind == "twoway") {
            if (idx < 0 || idx >= static_cast<i64>(r.twoways.size())) throw Error("twoway index out of range");
            TwoWayData o;
            o.C = read_matrix(in, "C");
            o.D = read_matrix(in, "D");
            r.twoways[st(idx)] = std::move(o);
            seen_o[st(idx)] = true;
        } else {
            throw Error("unknown part kind '" + kind + "'");
        }
    }
    for (bool s : seen_t)
        if (!s) throw Error("missing triangle block");
    for (bool s : seen_o)
        if (!s) throw Error("missing twoway block");
    r.validate_shapes();
    return r;
}

std::string serialize_wconfig(const WConfig& w) {
    std::ostringstream out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) out << '|';
        for (std::size_t i = 0; i < w[k].size(); ++i) out << (i ? "," : "") << rat_str(w[k][i]);
    }
    return out.str();
}

WConfig parse_wconfig(const std::string& text) {
    WConfig out;
    std::size_t expected = text.empty() ? 0 : 1 + static_cast<std::size_t>(std::count(text.begin(), text.end(), '|'));
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, '|')) {
        std::vector<Rat> list;
        std::istringstream ps(part);
        std::string tok;
        while (std::getline(ps, tok, ','))
            if (!tok.empty()) list.push_back(parse_rat(tok));
        out.push_back(std::move(list));
    }
    while (out.size() < expected) out.push_back({}); // trailing empty intervals
    return out;
}

} // namespace bow
