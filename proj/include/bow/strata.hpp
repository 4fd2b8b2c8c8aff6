#pragma once

#include "bow/weights.hpp"

#include <vector>

namespace bow {

// One symplectic leaf of the stratification, labeled by a dominant kappa
// between mu and lambda - |k| delta plus (affine) a partition k. The slice
// data records the gauge theory of M(kappa, lambda - |k| delta) and the
// centered Uhlenbeck factors, one per part.
struct StratumRecord {
    AffineWeight kappa;
    std::vector<i64> partition; // weakly decreasing positive parts
    i64 stratum_dim = 0;        // 2 sum v''(mu,kappa) + 2 #parts
    GaugeData slice_gauge;      // gauge data of M(kappa, lambda - |k| delta)
    std::vector<std::pair<i64, i64>> uhlenbeck; // (k_j, n), dim 2(k_j n - 1) each
    bool nonempty = true;
    bool operator==(const StratumRecord&) const = default;
};

std::vector<StratumRecord> enumerate_strata(const GaugeData& g);

// Slice of a single record; validates that the record belongs to the
// stratification of g.
struct SliceInfo {
    GaugeData gauge;
    std::vector<std::pair<i64, i64>> uhlenbeck;
    i64 dim = 0; // 2 sum(slice v) + sum 2(k_j n - 1)
};
SliceInfo stratum_slice(const GaugeData& g, const StratumRecord& s);

// All dominant weights kappa with mu <= kappa <= lambda (same level, charge,
// and, in the affine case, d-degree bounded by lambda's).
std::vector<AffineWeight> dominant_between(const AffineWeight& mu, const AffineWeight& lambda);

std::string stratum_str(const StratumRecord& s);

} // namespace bow
