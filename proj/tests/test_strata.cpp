#include "doctest.h"

#include "bow/strata.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>
#include <random>

using namespace bow;

namespace {

// Independent brute-force oracle: all integer vectors with the right charge
// and entries bounded by the extremes of mu and lambda, filtered by
// dominance and betweenness.
std::vector<AffineWeight> brute_dominant_between(const AffineWeight& mu, const AffineWeight& lambda) {
    i64 n = mu.n();
    i64 lo = *std::min_element(mu.vec.begin(), mu.vec.end());
    i64 hi = *std::max_element(lambda.vec.begin(), lambda.vec.end()) + lambda.d_deg - mu.d_deg;
    std::vector<AffineWeight> out;
    for (i64 dd = mu.d_deg; dd <= lambda.d_deg; ++dd) {
        std::vector<i64> cur(static_cast<std::size_t>(n), 0);
        std::function<void(i64)> rec = [&](i64 i) {
            if (i == n) {
                AffineWeight k{cur, dd, mu.level};
                if (k.charge() != mu.charge()) return;
                if (!k.dominant()) return;
                if (!dominance_leq(mu, k) || !dominance_leq(k, lambda)) return;
                out.push_back(k);
                return;
            }
            for (i64 v = lo; v <= hi; ++v) {
                cur[static_cast<std::size_t>(i)] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
    return out;
}

bool same_weight_set(std::vector<AffineWeight> a, std::vector<AffineWeight> b) {
    auto key = [](const AffineWeight& w) { return std::make_pair(w.d_deg, w.vec); };
    std::sort(a.begin(), a.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::sort(b.begin(), b.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

} // namespace

TEST_CASE("finite strata of ([1,1],[2,0])") {
    // lambda = [2,0], mu = [1,1]: gauge data w = (2), v = (1)
    GaugeData g{DiagramKind::Finite, {1}, {2}};
    auto [lambda, mu] = weights_from_gauge(g);
    CHECK(lambda.vec == std::vector<i64>{2, 0});
    CHECK(mu.vec == std::vector<i64>{1, 1});
    std::vector<StratumRecord> strata = enumerate_strata(g);
    REQUIRE(strata.size() == 2);
    std::vector<i64> dims;
    for (auto& s : strata) {
        dims.push_back(s.stratum_dim);
        CHECK(s.nonempty);
        CHECK(s.partition.empty());
    }
    std::sort(dims.begin(), dims.end());
    CHECK(dims == std::vector<i64>{0, 2});

    // the slice at kappa = [1,1] is M([1,1],[2,0]) itself: v = (1), w = (2)
    for (auto& s : strata)
        if (s.kappa.vec == std::vector<i64>{1, 1}) {
            SliceInfo si = stratum_slice(g, s);
            CHECK(si.gauge.v == std::vector<i64>{1});
            CHECK(si.gauge.w == std::vector<i64>{2});
            CHECK(si.dim == 2);
        }
}

TEST_CASE("mu = lambda gives the single point stratum") {
    GaugeData g{DiagramKind::Finite, {0, 0}, {1, 1}};
    std::vector<StratumRecord> strata = enumerate_strata(g);
    REQUIRE(strata.size() == 1);
    CHECK(strata[0].stratum_dim == 0);
    SliceInfo si = stratum_slice(g, strata[0]);
    CHECK(std::accumulate(si.gauge.v.begin(), si.gauge.v.end(), i64(0)) == 0);
}

TEST_CASE("affine Jordan strata") {
    GaugeData g{DiagramKind::Affine, {2}, {1}};
    std::vector<StratumRecord> strata = enumerate_strata(g);
    REQUIRE(strata.size() == 4);
    int nonempty = 0, empty = 0;
    for (auto& s : strata) {
        (s.nonempty ? nonempty : empty) += 1;
        SliceInfo si = stratum_slice(g, s);
        CHECK(s.stratum_dim + si.dim == 4); // ambient 2 sum v
        if (s.partition == std::vector<i64>{1}) {
            CHECK(si.uhlenbeck == std::vector<std::pair<i64, i64>>{{1, 1}});
            CHECK(si.dim == 0); // 2(kn-1) = 0 and the weight pair is a point
        }
    }
    CHECK(nonempty == 2);
    CHECK(empty == 2);
}

TEST_CASE("finite enumeration against the brute-force oracle") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<i64> un(2, 4), val(0, 2);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 60; ++trial) {
        GaugeData g;
        g.kind = DiagramKind::Finite;
        i64 n = un(rng);
        for (i64 i = 0; i + 1 < n; ++i) {
            g.v.push_back(val(rng));
            g.w.push_back(val(rng));
        }
        auto [lambda, mu] = weights_from_gauge(g);
        if (lambda.charge() > 6) continue;
        if (!dominance_leq(mu, lambda)) continue;
        ++done;
        std::vector<AffineWeight> expected = brute_dominant_between(mu, lambda);
        std::vector<AffineWeight> got;
        for (auto& s : enumerate_strata(g)) got.push_back(s.kappa);
        CHECK(same_weight_set(expected, got));
    }
    CHECK(done >= 40);
}

TEST_CASE("affine enumeration against the oracle and dimension bookkeeping") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<i64> un(1, 3), val(0, 2);
    int done = 0;
    for (int trial = 0; trial < 400 && done < 40; ++trial) {
        GaugeData g;
        g.kind = DiagramKind::Affine;
        i64 n = un(rng);
        for (i64 i = 0; i < n; ++i) {
            g.v.push_back(val(rng));
            g.w.push_back(val(rng));
        }
        auto [lambda, mu] = weights_from_gauge(g);
        i64 level = lambda.level;
        if (!dominance_leq(mu, lambda)) continue;
        i64 ambient = 0;
        for (i64 x : g.v) ambient += 2 * x;
        if (ambient == 0 || ambient > 12) continue;
        ++done;
        std::vector<StratumRecord> strata = enumerate_strata(g);
        for (auto& s : strata) {
            SliceInfo si = stratum_slice(g, s);
            CHECK(s.stratum_dim + si.dim == ambient);
            CHECK(dominance_leq(mu, s.kappa));
        }
        // oracle for the kappa sets per partition (level >= 2 only; the
        // level <= 1 branches are the theorem's special cases)
        if (level >= 2) {
            std::map<std::vector<i64>, std::vector<AffineWeight>> by_part;
            for (auto& s : strata) by_part[s.partition].push_back(s.kappa);
            for (auto& [part, ks] : by_part) {
                i64 weight = std::accumulate(part.begin(), part.end(), i64(0));
                AffineWeight top = lambda;
                top.d_deg -= weight;
                CHECK(same_weight_set(ks, brute_dominant_between(mu, top)));
            }
        }
        // counts: (mu, mu) has exactly one stratum
        GaugeData zero = g;
        for (auto& x : zero.v) x = 0;
        CHECK(enumerate_strata(zero).size() == 1);
    }
    CHECK(done >= 30);
}

TEST_CASE("slice recursion on a small instance") {
    // strata of the slice M(kappa, lambda) embed into the ambient strata
    GaugeData g{DiagramKind::Finite, {1}, {2}};
    for (auto& s : enumerate_strata(g)) {
        SliceInfo si = stratum_slice(g, s);
        if (std::accumulate(si.gauge.v.begin(), si.gauge.v.end(), i64(0)) == 0) continue;
        for (auto& inner : enumerate_strata(si.gauge)) {
            CHECK(dominance_leq(s.kappa, inner.kappa));
        }
    }
}

TEST_CASE("stratum_slice rejects foreign records") {
    GaugeData g{DiagramKind::Finite, {1}, {2}};
    StratumRecord fake;
    fake.kappa = AffineWeight{{5, -3}, 0, 2};
    CHECK_THROWS_AS(stratum_slice(g, fake), Error);
}
