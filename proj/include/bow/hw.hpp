#pragma once

#include "bow/diagram.hpp"

namespace bow {

// One Hanany-Witten transition at the adjacent pair (position, position+1).
// The two nodes must be one x and one o; the middle dimension m is replaced
// by m' = l + n + 1 - m. Moves that would need m' < 0 are rejected.
// With nu_star != 0 the complex parameter of the moved o shifts by -nu_star
// when the o passes the x anticlockwise and by +nu_star the other way; this
// keeps the matrix-level transition on shell.
BowDiagram hw_move(const BowDiagram& d, i64 position);

struct MoveList {
    std::vector<i64> positions;
};

BowDiagram replay_moves(const BowDiagram& d, const MoveList& moves);

// Normalizes a diagram with all N(x_i, x_{i+1}) >= 0 to the HW-equivalent
// cobalanced diagram (all N_x = 0), following the constructive order:
// gather the o nodes into the base arc, redistribute them so the arc counts
// match the pair invariants, then sweep every x across |N_x| of them.
struct CobalanceResult {
    BowDiagram diagram;
    MoveList moves;
};

CobalanceResult to_cobalanced(const BowDiagram& d);

// Intermediate stop of the same procedure: all o gathered and distributed so
// the N_x are equal but not yet zero (the separated normal form).
CobalanceResult to_separated(const BowDiagram& d);

// Unique balanced diagram with the given signature (pair invariants plus one
// quadratic invariant pin the dimension vector). kind tells affine/finite;
// n and l are the node counts of x and o.
BowDiagram balanced_from_signature(const DiagramSignature& s, DiagramKind kind, i64 n, i64 l);

} // namespace bow
