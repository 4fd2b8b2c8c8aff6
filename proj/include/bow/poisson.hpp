#pragma once

#include "bow/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bow {

// Generators of the bracket algebra of one triangle or two-way part. The
// index pair (i, j) follows the paper's convention: the function X_{ij}
// reads the (j, i) entry of the matrix X.
enum class GenFamily : std::uint8_t { A, B, Bp, a, b, C, D };

struct Gen {
    std::uint8_t part = 0;
    GenFamily family = GenFamily::A;
    std::uint8_t i = 0; // 1-based
    std::uint8_t j = 0; // 1-based, 0 for vector families
    auto operator<=>(const Gen&) const = default;
};

using Monomial = std::vector<Gen>; // sorted multiset

struct PoissonPoly {
    std::map<Monomial, Rat> terms;

    static PoissonPoly zero() { return {}; }
    static PoissonPoly constant(const Rat& c);
    static PoissonPoly gen(Gen g);

    bool is_zero() const { return terms.empty(); }
    void add_term(const Monomial& m, const Rat& c);
    PoissonPoly operator+(const PoissonPoly& o) const;
    PoissonPoly operator-(const PoissonPoly& o) const;
    PoissonPoly operator*(const PoissonPoly& o) const;
    PoissonPoly operator*(const Rat& c) const;
    bool operator==(const PoissonPoly&) const = default;
    std::string str() const;
};

// One part of a bracket table: a triangle with source/target sizes or a
// two-way arrow with from/to sizes. Generators of different parts always
// bracket to zero.
struct PartSpec {
    bool triangle = true;
    i64 size1 = 1; // triangle: v1 (source); two-way: from
    i64 size2 = 1; // triangle: v2 (target); two-way: to
};

struct BracketTable {
    std::vector<PartSpec> parts;
    int sign = 1; // -1 flips to the Coulomb-branch comparison convention

    std::vector<Gen> generators() const;
    // bracket of two generators, the defining relations
    PoissonPoly gen_bracket(Gen x, Gen y) const;
    // bilinear, skew, Leibniz extension
    PoissonPoly bracket(const PoissonPoly& p, const PoissonPoly& q) const;
};

BracketTable build_table(const PartSpec& part);
BracketTable build_junction_table(i64 v0, i64 v1, i64 v2); // two-way(v0,v1) + triangle(v1,v2)

// tr X^p as a polynomial (X square: family B, Bp, or derived CD/DC products
// are not needed; traces are over B families).
PoissonPoly trace_power(const BracketTable& t, std::uint8_t part, GenFamily fam, i64 p);

// mu_{ij} = sum_m (B'_{mj} A_{im} + A_{mj} B_{im}) + a_j b_i of a triangle part.
PoissonPoly mu_entry(const BracketTable& t, std::uint8_t part, i64 i, i64 j);

struct IdentityReport {
    std::string name;
    bool passed = true;
    std::string detail;
};

// Symbolically verifies the bracket-table identities: the Poisson-ideal
// displays, trace commutativity up to max_pow, the junction compatibility
// bracket, and Jacobi on all generator triples.
std::vector<IdentityReport> verify_identities(i64 v1, i64 v2, i64 max_pow);

} // namespace bow
