#pragma once

#include <gmpxx.h>
#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bow {

// Exact rational scalar. All arithmetic in the library stays in Q; nothing
// is ever rounded, so equality tests are meaningful.
using Rat = mpq_class;
using Int = mpz_class;
using i64 = long long;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline Rat rat(i64 p) { return Rat(static_cast<long>(p)); }

inline Rat rat(i64 p, i64 q) {
    if (q == 0) throw Error("rational with zero denominator");
    Rat r(static_cast<long>(p), static_cast<long>(q));
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q"; canonical form with positive denominator.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw Error("empty rational token");
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    bool seen_digit = false, seen_slash = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '/') {
            if (seen_slash || !seen_digit) throw Error("malformed rational '" + s + "'");
            seen_slash = true;
            seen_digit = false;
        } else if (s[i] >= '0' && s[i] <= '9') {
            seen_digit = true;
        } else {
            throw Error("malformed rational '" + s + "'");
        }
    }
    if (!seen_digit) throw Error("malformed rational '" + s + "'");
    Rat r;
    if (r.set_str(s, 10) != 0) throw Error("malformed rational '" + s + "'");
    if (r.get_den() == 0) throw Error("rational with zero denominator");
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline i64 to_i64(const Int& z) {
    if (!z.fits_slong_p()) throw Error("integer out of range");
    return static_cast<i64>(z.get_si());
}

} // namespace bow

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    using Real = mpq_class;
    using NonInteger = mpq_class;
    using Nested = mpq_class;
    using Literal = long;
    static inline Real epsilon() { return mpq_class(0); }
    static inline Real dummy_precision() { return mpq_class(0); }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 100,
        MulCost = 100
    };
};

} // namespace Eigen
