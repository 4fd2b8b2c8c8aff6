#pragma once

#include "bow/diagram.hpp"

#include <string>
#include <vector>

namespace bow {

// Weakly decreasing integer vector with lambda_1 - lambda_n <= level.
struct GenYoungDiagram {
    std::vector<i64> entries;
    i64 level = 0;
    void validate() const;
    bool operator==(const GenYoungDiagram&) const = default;
};

// Integer weight vector in the gl_n convention plus the d-degree.
struct AffineWeight {
    std::vector<i64> vec;
    i64 d_deg = 0;
    i64 level = 0;
    i64 charge() const;
    i64 n() const { return static_cast<i64>(vec.size()); }
    bool dominant() const;
    bool operator==(const AffineWeight&) const = default;
};

struct GaugeData {
    DiagramKind kind = DiagramKind::Affine;
    std::vector<i64> v; // affine: v_0..v_{n-1}; finite: v_1..v_{n-1}
    std::vector<i64> w; // same indexing
    i64 n() const;
    void validate() const;
    bool operator==(const GaugeData&) const = default;
};

// u = w - C v with the Cartan matrix of (affine) type A.
std::vector<i64> u_vector(const GaugeData& g);

std::pair<AffineWeight, AffineWeight> weights_from_gauge(const GaugeData& g); // (lambda, mu)
GaugeData gauge_from_weights(const AffineWeight& lambda, const AffineWeight& mu, DiagramKind kind);

// mu <= lambda in the dominance order (partial sums; affine adds the
// d-degree correction).
bool dominance_leq(const AffineWeight& mu, const AffineWeight& lambda);

// Level-rank transpose: flip each n x level rectangle along its diagonal.
GenYoungDiagram transpose_gyd(const GenYoungDiagram& g);

// Mirror gauge data across the Coulomb/Higgs dictionary: generalized Young
// diagrams are swapped and transposed; the free multiple of (1,...,1) in v'
// is pinned by matching 2 sum v = sum 2 v'w' - (v'_p - v'_{p-1})^2.
GaugeData mirror_gauge(const GaugeData& g);

struct Gradings {
    i64 deg_m_y; // v_{i+1} + v_{i-1} + w_i
    i64 torus_index;
    i64 deg_m_w; // always 2
};
Gradings gradings(const GaugeData& g, i64 i);

// Balanced bow diagram of the gauge theory: for each node i an x followed
// by w_i o's, all segment dimensions on that stretch equal to v_i.
BowDiagram gauge_to_diagram(const GaugeData& g);
GaugeData diagram_to_gauge(const BowDiagram& d);

std::string weight_str(const AffineWeight& w);
GaugeData parse_gauge(const std::string& text, DiagramKind kind); // "(v0,..;w0,..)"

} // namespace bow
