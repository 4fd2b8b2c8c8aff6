#include "bow/strata.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace bow {

namespace {

std::size_t st(i64 i) { return static_cast<std::size_t>(i); }

std::vector<std::vector<i64>> partitions_up_to(i64 maxweight) {
    std::vector<std::vector<i64>> out;
    out.push_back({});
    std::function<void(std::vector<i64>&, i64, i64)> rec = [&](std::vector<i64>& cur, i64 left, i64 cap) {
        for (i64 p = std::min(left, cap); p >= 1; --p) {
            cur.push_back(p);
            out.push_back(cur);
            rec(cur, left - p, p);
            cur.pop_back();
        }
    };
    std::vector<i64> cur;
    rec(cur, maxweight, maxweight);
    return out;
}

// Enumerate dominant kappa with given length, level, charge and the
// partial-sum betweenness bounds against (mu + dmu) and (lambda + dl).
// dmu, dl are the d-degree corrections relative to kappa.
void scan_dominant(const AffineWeight& mu, const AffineWeight& lambda, i64 ddmu, i64 ddl,
                   std::vector<AffineWeight>& out, i64 kappa_d) {
    i64 n = mu.n();
    std::vector<i64> psl(st(n) + 1, 0), psm(st(n) + 1, 0);
    for (i64 i = 0; i < n; ++i) {
        psl[st(i + 1)] = psl[st(i)] + lambda.vec[st(i)];
        psm[st(i + 1)] = psm[st(i)] + mu.vec[st(i)];
    }
    std::vector<i64> cur(st(n), 0);
    std::function<void(i64, i64)> rec = [&](i64 i, i64 sum) {
        if (i == n) {
            if (sum != mu.charge()) return;
            if (cur.front() - cur.back() > mu.level) return;
            out.push_back(AffineWeight{cur, kappa_d, mu.level});
            return;
        }
        // dominance bound from the previous entry; betweenness bounds from
        // partial sums: psm_{i+1} - ddmu <= sum + k <= psl_{i+1} + ddl
        i64 hi = i == 0 ? psl[1] + ddl : std::min(cur[st(i - 1)], psl[st(i + 1)] + ddl - sum);
        i64 lo = psm[st(i + 1)] - ddmu - sum;
        // remaining entries are <= k each: sum + k + (n-1-i) k >= charge is
        // implied by the partial-sum lower bounds, so no extra pruning needed
        for (i64 k = hi; k >= lo; --k) {
            cur[st(i)] = k;
            rec(i + 1, sum + k);
        }
    };
    rec(0, 0);
}

} // namespace

std::vector<AffineWeight> dominant_between(const AffineWeight& mu, const AffineWeight& lambda) {
    if (mu.n() != lambda.n() || mu.level != lambda.level || mu.charge() != lambda.charge())
        throw Error("incomparable weight pair");
    std::vector<AffineWeight> out;
    i64 dspan = lambda.d_deg - mu.d_deg;
    if (dspan < 0) return out;
    // ddmu = kappa_d - mu_d = c, ddl = lambda_d - kappa_d = dspan - c
    for (i64 c = 0; c <= dspan; ++c) scan_dominant(mu, lambda, c, dspan - c, out, mu.d_deg + c);
    return out;
}

std::vector<StratumRecord> enumerate_strata(const GaugeData& g) {
    g.validate();
    auto [lambda, mu] = weights_from_gauge(g);
    i64 n = g.n();
    i64 level = lambda.level;
    std::vector<StratumRecord> out;

    if (g.kind == DiagramKind::Finite) {
        std::vector<AffineWeight> ks = dominant_between(mu, lambda);
        for (const AffineWeight& kappa : ks) {
            StratumRecord r;
            r.kappa = kappa;
            GaugeData below = gauge_from_weights(kappa, mu, DiagramKind::Finite);
            r.stratum_dim = 0;
            for (i64 x : below.v) r.stratum_dim += 2 * x;
            r.slice_gauge = gauge_from_weights(lambda, kappa, DiagramKind::Finite);
            r.nonempty = true;
            out.push_back(std::move(r));
        }
        return out;
    }

    // affine: partitions k with |k| <= <d, lambda - mu>, kappa dominant with
    // mu <= kappa <= lambda - |k| delta. level = 1 only allows the top kappa.
    i64 dspan = lambda.d_deg - mu.d_deg;
    for (const std::vector<i64>& part : partitions_up_to(dspan)) {
        i64 weight = std::accumulate(part.begin(), part.end(), i64(0));
        AffineWeight top = lambda;
        top.d_deg -= weight; // lambda - |k| delta
        std::vector<AffineWeight> ks;
        if (level == 0) {
            // chainsaw: kappa is forced to the top weight
            if (dominance_leq(mu, top)) ks.push_back(top);
        } else if (level == 1) {
            if (dominance_leq(mu, top)) ks.push_back(top);
        } else {
            ks = dominant_between(mu, top);
        }
        for (const AffineWeight& kappa : ks) {
            StratumRecord r;
            r.kappa = kappa;
            r.partition = part;
            GaugeData below = gauge_from_weights(kappa, mu, DiagramKind::Affine);
            r.stratum_dim = 2 * static_cast<i64>(part.size());
            for (i64 x : below.v) r.stratum_dim += 2 * x;
            r.slice_gauge = gauge_from_weights(top, kappa, DiagramKind::Affine);
            for (i64 p : part) r.uhlenbeck.emplace_back(p, n);
            r.nonempty = n != 1 || kappa == mu;
            if (level == 0) r.nonempty = true;
            out.push_back(std::move(r));
        }
    }
    return out;
}

SliceInfo stratum_slice(const GaugeData& g, const StratumRecord& s) {
    std::vector<StratumRecord> all = enumerate_strata(g);
    const StratumRecord* found = nullptr;
    for (const StratumRecord& r : all)
        if (r.kappa == s.kappa && r.partition == s.partition) { found = &r; break; }
    if (!found) throw Error("record does not belong to the stratification");
    SliceInfo info;
    info.gauge = found->slice_gauge;
    info.uhlenbeck = found->uhlenbeck;
    info.dim = 0;
    for (i64 x : info.gauge.v) info.dim += 2 * x;
    for (auto& [k, rank] : info.uhlenbeck) info.dim += 2 * (k * rank - 1);
    return info;
}

std::string stratum_str(const StratumRecord& s) {
    std::ostringstream out;
    out << "kappa=<";
    for (std::size_t i = 0; i < s.kappa.vec.size(); ++i) out << (i ? "," : "") << s.kappa.vec[i];
    out << ";" << s.kappa.d_deg << "> k=[";
    for (std::size_t i = 0; i < s.partition.size(); ++i) out << (i ? "," : "") << s.partition[i];
    out << "] dim=" << s.stratum_dim << " nonempty=" << (s.nonempty ? 1 : 0) << " slice=(";
    for (std::size_t i = 0; i < s.slice_gauge.v.size(); ++i) out << (i ? "," : "") << s.slice_gauge.v[i];
    out << ";";
    for (std::size_t i = 0; i < s.slice_gauge.w.size(); ++i) out << (i ? "," : "") << s.slice_gauge.w[i];
    out << ")";
    for (auto& [k, n] : s.uhlenbeck) out << " U(" << k << "," << n << ")";
    return out.str();
}

} // namespace bow
