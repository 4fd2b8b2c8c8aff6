#pragma once

#include "bow/rational.hpp"

#include <string>
#include <vector>

namespace bow {

enum class NodeKind { X, O };
enum class DiagramKind { Affine, Finite };

// A bow diagram: x-points and two-way arrows (o) on a circle (affine) or an
// interval (finite), with a nonnegative dimension on every segment between
// nodes. nu_r / nu_c carry one rational per o node, nu_star is global.
struct BowDiagram {
    DiagramKind kind = DiagramKind::Affine;
    std::vector<NodeKind> nodes;
    std::vector<i64> dims; // one per node (affine, dims[i] precedes nodes[i]); nodes+1 for finite
    std::vector<Rat> nu_r;
    std::vector<Rat> nu_c;
    Rat nu_star = Rat(0);

    i64 node_count() const { return static_cast<i64>(nodes.size()); }
    i64 count(NodeKind k) const;
    i64 num_x() const { return count(NodeKind::X); }
    i64 num_o() const { return count(NodeKind::O); }
    bool is_affine() const { return kind == DiagramKind::Affine; }

    // segment dimension before / after node i (affine indices wrap)
    i64 dim_before(i64 i) const;
    i64 dim_after(i64 i) const;

    // positions of all nodes of a kind, in serialized (anticlockwise) order
    std::vector<i64> positions(NodeKind k) const;

    // o index (order among o nodes) of the node at position p, and back
    i64 o_index(i64 pos) const;
    i64 x_index(i64 pos) const;

    void validate() const;
    bool operator==(const BowDiagram& other) const = default;
};

// HW-invariant fingerprint of a diagram.
struct DiagramSignature {
    std::vector<i64> n_pairs_h; // N(h_p, h_{p+1}), h numbered clockwise
    std::vector<i64> n_pairs_x; // N(x_i, x_{i+1}), x numbered anticlockwise
    i64 quad_h = 0;             // -sum N_h^2 + sum over x of (v- + v+)
    i64 quad_x = 0;             // -sum N_x^2 + sum over o of (v_in + v_out)
    bool balanced = false;
    bool cobalanced = false;
    i64 expected_dim = 0;       // dim M - dim N - dim G
    bool operator==(const DiagramSignature&) const = default;
};

BowDiagram parse_diagram(const std::string& text);
std::string serialize_diagram(const BowDiagram& d);

// Dimension jumps at single nodes: N_h = v_in - v_out, N_x = v_before - v_after.
std::vector<i64> node_jumps(const BowDiagram& d, NodeKind k);

DiagramSignature signature(const BowDiagram& d);

// Exchange x and o everywhere; nu lists are re-keyed to the new o set and
// reset to zero.
BowDiagram mirror_diagram(const BowDiagram& d);

} // namespace bow
