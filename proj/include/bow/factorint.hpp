#pragma once

#include "bow/rational.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace bow {

// Integer factorization, used only to enumerate candidate rational roots of
// characteristic polynomials. Trial division catches the smooth numbers we
// see in practice; Brent's variant of Pollard rho handles the rest.
namespace detail {

inline Int mulmod(const Int& a, const Int& b, const Int& n) { return (a * b) % n; }

inline Int pollard_brent(const Int& n) {
    if (n % 2 == 0) return Int(2);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x5eedUL);
    for (;;) {
        Int y = rng.get_z_range(n - 1) + 1;
        Int c = rng.get_z_range(n - 1) + 1;
        Int m = 128, g = 1, r = 1, q = 1, x, ys;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = std::min(m, Int(r - k));
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = mulmod(q, abs(x - y), n);
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                Int d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n) return g;
    }
}

inline void factor_into(Int n, std::map<Int, int>& out) {
    if (n <= 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
        ++out[n];
        return;
    }
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            ++out[Int(p)];
            n /= p;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
        ++out[n];
        return;
    }
    long p = 17;
    while (p < 100000 && Int(p) * p <= n) {
        if (n % p == 0) {
            while (n % p == 0) {
                ++out[Int(p)];
                n /= p;
            }
            if (n == 1) return;
            if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
                ++out[n];
                return;
            }
        }
        p += 2;
    }
    if (Int(p) * p > n) {
        ++out[n];
        return;
    }
    Int d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

inline std::map<Int, int> factorize(Int n) {
    std::map<Int, int> out;
    if (n < 0) n = -n;
    detail::factor_into(n, out);
    return out;
}

// All positive divisors of |n|, unsorted. n must be nonzero.
inline std::vector<Int> divisors(const Int& n) {
    if (n == 0) throw Error("divisors of zero");
    auto f = factorize(n);
    std::vector<Int> out{Int(1)};
    for (auto& [p, e] : f) {
        std::size_t sz = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

} // namespace bow
