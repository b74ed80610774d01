#include "ziptree/rank.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ziptree {

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless method.
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = static_cast<__uint128_t>((*this)()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

void RankPolicy::check() const {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("rank policy: p must lie strictly between 0 and 1, got " +
                                    std::to_string(p));
    if (fractional_bits > 64)
        throw std::invalid_argument("rank policy: fractional_bits must be at most 64");
}

namespace {

std::uint64_t fair_coin_rank(Rng& rng) {
    // Heads are 1 bits; the rank is the number of heads before the first tail.
    std::uint64_t heads = 0;
    for (;;) {
        const std::uint64_t word = rng();
        const int run = std::countr_one(word);
        heads += static_cast<std::uint64_t>(run);
        if (run < 64 || heads >= kRankCeiling) return heads;
    }
}

std::uint64_t inverse_transform_rank(Rng& rng, double p) {
    // P(floor(ln U / ln p) >= j) = P(U <= p^j) = p^j.
    const double k = std::floor(std::log(rng.uniform_open0()) / std::log(p));
    if (k >= static_cast<double>(kRankCeiling)) return kRankCeiling;
    return static_cast<std::uint64_t>(k);
}

}  // namespace

Rank draw_rank(Rng& rng, const RankPolicy& policy) {
    const std::uint64_t k = policy.p == 0.5 ? fair_coin_rank(rng) : inverse_transform_rank(rng, policy.p);
    if (k >= kRankCeiling)
        throw RankOverflow("drawn rank reached the ceiling of 2^16; generator is likely broken");

    Rank r{static_cast<std::uint32_t>(k)};
    if (policy.fractional_bits > 0) {
        r.bits = policy.fractional_bits;
        r.numerator = rng() >> (64 - policy.fractional_bits);
    }
    return r;
}

}  // namespace ziptree
