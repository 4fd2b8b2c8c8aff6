#pragma once

#include "bow/diagram.hpp"
#include "bow/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bow {

// Maps of one x-point: A : V_src -> V_tgt, loops on both sides, a framing
// column into V_tgt and a framing row out of V_src.
struct TriangleData {
    MatQ A;
    MatQ B_src;
    MatQ B_tgt;
    MatQ a; // column, tgt x 1
    MatQ b; // row, 1 x src
};

// Maps of one o node: C runs anticlockwise (V_out -> V_in), D back.
struct TwoWayData {
    MatQ C;
    MatQ D;
};

// Exact-rational matrix data attached to a bow diagram. Triangles are
// indexed by x order, two-way parts by o order, both in serialized order.
struct BowRep {
    BowDiagram diagram;
    std::vector<TriangleData> triangles;
    std::vector<TwoWayData> twoways;

    void validate_shapes() const;
    i64 seg_count() const;
};

// Residuals of every defining equation: one matrix per x (the triangle
// equation) and one per constrained segment (the nu-shifted two-way/glue
// equations; boundary segments of finite diagrams are unconstrained).
struct MomentResidual {
    std::vector<MatQ> triangle;           // per x
    std::vector<std::optional<MatQ>> segment; // per segment index
    bool all_zero() const;
};
MomentResidual moment_residual(const BowRep& r);

struct SConditionReport {
    bool s1 = true;
    bool s2 = true;
    MatQ s1_witness; // largest invariant subspace inside Ker A cap Ker b
    MatQ s2_witness; // smallest invariant subspace containing Im A + Im a
    bool on_shell = true;
};
enum class SScope { SingleTriangle, ChainsawGlobal };
SConditionReport check_s_conditions(const BowRep& r, i64 triangle_index);
SConditionReport check_s_conditions(const BowRep& r, SScope scope);
bool triangle_full_rank(const BowRep& r, i64 triangle_index);

// A graded family of subspaces, one basis matrix per segment.
struct GradedFamily {
    std::vector<MatQ> basis; // per segment
};
struct NuVerdict {
    bool is_test_family = false;   // hypotheses of (nu1)/(nu2) hold
    std::string failed_hypothesis; // which hypothesis broke, if any
    Rat pairing = Rat(0);          // sum nu^R_p dim S_p (resp. codim T_p)
    bool satisfied = false;        // inequality holds (strictly in strict mode)
};
enum class NuMode { SubspaceS, QuotientT };
NuVerdict check_nu_on_subspace(const BowRep& r, const GradedFamily& fam, NuMode mode, bool strict = false);

// Candidate test families assembled from generalized eigenspaces; needs all
// loop spectra split over Q.
std::vector<GradedFamily> candidate_families(const BowRep& r, NuMode mode, std::size_t max_count = 64);

// Hurtubise normal form of a single triangle.
struct HurtubiseForm {
    i64 v1 = 0, v2 = 0;
    MatQ u;
    MatQ eta; // v1 != v2 case
    MatQ h, I, J; // v1 == v2 case
};
TriangleData hurtubise_to_triangle(const HurtubiseForm& f);
HurtubiseForm triangle_to_hurtubise(const TriangleData& t);

// Orientation reversal of an on-shell stable triangle.
TriangleData reverse_triangle(const TriangleData& t);

// Hanany-Witten transition at the adjacent pair (position, position+1) of
// the underlying diagram; forward moves an o across the x anticlockwise,
// inverse reconstructs the middle space as a kernel.
enum class HwDirection { Forward, Inverse };
BowRep hw_transition_rep(const BowRep& r, i64 position, HwDirection dir);

// Factorization of the whole representation over a subset of the base
// spectrum (the eigenvalues of the B on the last segment of each
// x-interval). Off-diagonal triangle blocks are checked against the unique
// Sylvester solutions; two-way off-diagonal blocks must vanish.
struct FactorPair {
    BowRep inside;  // eigenvalues in the group
    BowRep outside; // complement
};
FactorPair factorize_at(const BowRep& r, const std::vector<Rat>& group);

// Generic on-shell representative from a w-configuration (one list of
// distinct rationals per x-interval).
using WConfig = std::vector<std::vector<Rat>>;
BowRep sample_generic(const BowDiagram& d, const WConfig& wcfg);

// x-interval structure of a diagram: interval k lists its segment indices in
// anticlockwise order; intervals are cut at x nodes (boundaries for finite).
struct IntervalStructure {
    std::vector<std::vector<i64>> segments;
    std::vector<std::vector<i64>> o_positions; // o nodes inside each interval
    std::vector<i64> in_triangle;              // triangle index whose target starts the interval, -1 if none
    std::vector<i64> out_triangle;             // triangle index whose source ends the interval, -1 if none
};
IntervalStructure interval_structure(const BowDiagram& d);

// Coordinates w_{i,k}, y_{i,k} per x-interval; intervals without both a
// source and target triangle yield no y (finite boundaries). For n = 1 the
// y are traces.
struct Coordinates {
    std::vector<std::vector<Rat>> w; // eigenvalues per interval, ascending
    std::vector<std::vector<Rat>> y;
};
Coordinates eval_coordinates(const BowRep& r);

// Composite of the interval's C maps (identity when there is no o).
MatQ interval_c_chain(const BowRep& r, i64 interval);
MatQ interval_d_chain(const BowRep& r, i64 interval);

// Collapse of a balanced gauge-layout rep onto its chainsaw quiver.
BowRep collapse_chainsaw(const BowRep& r);

// Scaling action: every map is multiplied by t^weight with
// wt(A,B,B',a,b) = (0,2,2,1+v1-v2,1+v2-v1) and wt(C) = wt(D) = 1; the nu
// parameters scale by t^2 so the result stays on shell.
BowRep scale_rep(const BowRep& r, const Rat& t);

// Scalar invariant battery: characteristic polynomials of all loops plus
// framing contractions through every interval, gauge-invariant and exact.
std::vector<Rat> invariant_battery(const BowRep& r, i64 word_cap = 4);

} // namespace bow
