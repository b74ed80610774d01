#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace ziptree {

/// Node rank: a geometric integer part plus an optional dyadic fraction
/// `numerator / 2^bits` used to break integer ties.
///
/// Ordering and equality are by numeric value, so (2, 1/2) == (2, 2/4).
struct Rank {
    std::uint32_t integer = 0;
    std::uint64_t numerator = 0;
    std::uint8_t bits = 0;

    constexpr Rank() = default;
    constexpr explicit Rank(std::uint32_t k) : integer(k) {}
    constexpr Rank(std::uint32_t k, std::uint64_t num, std::uint8_t b)
        : integer(k), numerator(num), bits(b) {}

    /// numerator < 2^bits, bits <= 64.
    [[nodiscard]] constexpr bool well_formed() const noexcept {
        if (bits > 64) return false;
        if (bits == 64) return true;
        return numerator < (std::uint64_t{1} << bits);
    }

    [[nodiscard]] constexpr bool is_integral() const noexcept { return numerator == 0; }
};

[[nodiscard]] constexpr std::strong_ordering compare_ranks(const Rank& a, const Rank& b) noexcept {
    if (auto c = a.integer <=> b.integer; c != 0) return c;
    // Scale the coarser fraction up to the finer precision. numerator < 2^bits
    // keeps the shifted value below 2^64.
    std::uint64_t na = a.numerator;
    std::uint64_t nb = b.numerator;
    if (a.bits < b.bits)
        na <<= (b.bits - a.bits);
    else if (b.bits < a.bits)
        nb <<= (a.bits - b.bits);
    return na <=> nb;
}

constexpr std::strong_ordering operator<=>(const Rank& a, const Rank& b) noexcept {
    return compare_ranks(a, b);
}
constexpr bool operator==(const Rank& a, const Rank& b) noexcept {
    return compare_ranks(a, b) == 0;
}

/// Integer ranks at or above this value are treated as a generator fault.
inline constexpr std::uint32_t kRankCeiling = 1u << 16;

class RankOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64. One 64-bit word of state; the same seed always yields the same
/// sequence. Models std::uniform_random_bit_generator.
class Rng {
public:
    using result_type = std::uint64_t;

    constexpr explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    constexpr std::uint64_t operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1].
    double uniform_open0() noexcept {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    [[nodiscard]] constexpr std::uint64_t state() const noexcept { return state_; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

private:
    std::uint64_t state_;
};

static_assert(std::uniform_random_bit_generator<Rng>);

/// Finalizer of SplitMix64; used to derive seeds and hash keys.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent sub-stream (trial, worker, ...).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

enum class RankMode { stored, key_function };

struct RankPolicy {
    RankMode mode = RankMode::stored;
    /// Continuation probability: P(integer = k) = p^k (1 - p).
    double p = 0.5;
    std::uint8_t fractional_bits = 0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless 0 < p < 1 and fractional_bits <= 64.
    void check() const;

    /// Policies that produce interchangeable ranks. The seed only matters when
    /// ranks are a function of the key.
    [[nodiscard]] bool compatible_with(const RankPolicy& other) const noexcept {
        return mode == other.mode && p == other.p && fractional_bits == other.fractional_bits &&
               (mode == RankMode::stored || seed == other.seed);
    }
};

/// Draw a rank from the geometric law of `policy` (mode is ignored).
/// Throws RankOverflow if the integer part reaches kRankCeiling.
Rank draw_rank(Rng& rng, const RankPolicy& policy);

/// 64-bit image of a key fed to the rank hash.
template <class Key>
[[nodiscard]] std::uint64_t key_bits(const Key& key) {
    if constexpr (std::is_integral_v<Key> || std::is_enum_v<Key>)
        return static_cast<std::uint64_t>(key);
    else
        return static_cast<std::uint64_t>(std::hash<Key>{}(key));
}

/// Rank as a pseudo-random function of (key, policy.seed), with the same
/// marginal law as draw_rank.
template <class Key>
[[nodiscard]] Rank rank_of_key(const Key& key, const RankPolicy& policy) {
    Rng local(mix64(policy.seed ^ mix64(key_bits(key))));
    return draw_rank(local, policy);
}

}  // namespace ziptree
