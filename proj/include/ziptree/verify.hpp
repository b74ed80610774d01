#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ziptree/rank.hpp"

namespace ziptree {

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::vector<std::size_t> sizes{0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    std::size_t iterations = 100'000;  ///< operations across all sizes
    RankPolicy policy{};
};

struct VerifyFailure {
    std::string suite;
    std::uint64_t seed = 0;  ///< seed of the failing run
    std::size_t step = 0;    ///< operation index within that run
    std::string detail;
};

struct VerifyReport {
    std::size_t runs = 0;
    std::size_t operations = 0;
    std::size_t checks = 0;
    std::optional<VerifyFailure> failure;

    [[nodiscard]] bool passed() const noexcept { return !failure.has_value(); }
    /// Deterministic multi-line summary.
    [[nodiscard]] std::string text() const;
};

/// Randomized invariant suites. Each run drives a recursive and an iterative
/// tree in lockstep with identical ranks around a target size, checking after
/// every operation that both validate, share one shape and agree with a
/// reference map; at checkpoints the shape must equal the oracle build and a
/// rebuild in shuffled order, and survive a skip-list round trip. Stops at the
/// first failure.
VerifyReport run_verify(const VerifyOptions& options);

/// Validates a structure dump (no repair). Parse errors throw
/// std::invalid_argument; invariant violations are reported as a failure.
VerifyReport verify_fixture(std::string_view dump_text, const RankPolicy& policy = {});

}  // namespace ziptree
