// Shared helpers for the unit and acceptance suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ziptree/oracle.hpp"
#include "ziptree/rank.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree::testing {

using Tree = ZipTree<std::int64_t, std::int64_t>;

struct ChiSquare {
    double statistic = 0;
    double critical = 0;
    std::size_t dof = 0;
    [[nodiscard]] bool passes() const { return statistic <= critical; }
};

/// Pearson test of observed counts against expected probabilities. Bins with
/// an expected count below 5 are folded into a single tail bin.
inline ChiSquare chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                            double alpha = 0.001) {
    const auto total_count = std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
    const double total = static_cast<double>(total_count);
    std::vector<double> obs, exp;
    double seen_obs = 0, seen_exp = 0;
    for (std::size_t i = 0; i < probs.size() && probs[i] * total >= 5; ++i) {
        obs.push_back(i < observed.size() ? static_cast<double>(observed[i]) : 0.0);
        exp.push_back(probs[i] * total);
        seen_obs += obs.back();
        seen_exp += exp.back();
    }
    if (total - seen_exp > 1e-9 * total) {
        obs.push_back(total - seen_obs);
        exp.push_back(total - seen_exp);
    }
    ChiSquare r;
    for (std::size_t i = 0; i < obs.size(); ++i) r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    r.dof = obs.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.critical = boost::math::quantile(boost::math::complement(dist, alpha));
    return r;
}

/// P(k) = p^k (1 - p) for k < kmax.
inline std::vector<double> geometric_probs(double p, std::size_t kmax) {
    std::vector<double> out(kmax);
    for (std::size_t k = 0; k < kmax; ++k) out[k] = std::pow(p, static_cast<double>(k)) * (1 - p);
    return out;
}

/// `n` distinct keys from [0, universe) with independent geometric ranks.
inline KeyRankSet<std::int64_t> random_key_ranks(Rng& rng, std::size_t n, std::uint64_t universe,
                                                 std::uint8_t frac_bits = 0) {
    std::vector<std::int64_t> keys;
    while (keys.size() < n) {
        auto k = static_cast<std::int64_t>(rng.below(universe));
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    RankPolicy pol;
    pol.fractional_bits = frac_bits;
    KeyRankSet<std::int64_t> out;
    for (auto k : keys) out.emplace_back(k, draw_rank(rng, pol));
    return out;
}

inline Tree build_by_insertion(const KeyRankSet<std::int64_t>& items, Strategy s = Strategy::iterative) {
    Tree t;
    for (const auto& [k, r] : items) t.insert_with_rank(k, k * 10, r, s);
    return t;
}

inline Shape<std::int64_t> make_shape(std::initializer_list<std::tuple<std::int64_t, std::uint32_t, int, int>> entries,
                                      int root = 0) {
    Shape<std::int64_t> s;
    for (const auto& [k, r, l, rr] : entries) s.nodes.push_back({k, Rank{r}, l, rr});
    s.root = entries.size() == 0 ? -1 : root;
    return s;
}

}  // namespace ziptree::testing
