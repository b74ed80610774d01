#include "ziptree/verify.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include <fmt/format.h>

#include "ziptree/dump.hpp"
#include "ziptree/oracle.hpp"
#include "ziptree/skiplist.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree {

namespace {

using Tree = ZipTree<std::int64_t, std::int64_t>;

constexpr std::size_t kRunLength = 2'000;

class Run {
public:
    Run(std::uint64_t seed, std::size_t target, const RankPolicy& policy, VerifyReport& report)
        : seed_(seed), target_(target), rng_(seed), policy_(policy), rec_(policy), iter_(policy), report_(report) {}

    /// Returns false on the first failure, recorded in the report.
    bool go(std::size_t ops) {
        if (!checkpoint()) return false;
        const auto universe = static_cast<std::uint64_t>(std::max<std::size_t>(2 * target_, 2));
        const std::size_t every = std::max<std::size_t>(target_, 16);
        for (step_ = 1; step_ <= ops; ++step_) {
            ++report_.operations;
            const auto key = static_cast<std::int64_t>(rng_.below(universe));
            const auto dice = rng_.below(10);
            // Grow until the target is reached, then mix evenly.
            if (model_.size() < target_ || dice < 4) {
                if (!insert(key)) return false;
            } else if (dice < 8) {
                if (!erase(key)) return false;
            } else if (!search(key)) {
                return false;
            }
            if (!after_op()) return false;
            if (step_ % every == 0 && !checkpoint()) return false;
        }
        return checkpoint();
    }

private:
    bool fail(std::string suite, std::string detail) {
        report_.failure = VerifyFailure{std::move(suite), seed_, step_, std::move(detail)};
        return false;
    }

    bool insert(std::int64_t key) {
        const Rank r = draw_rank(rng_, policy_);
        const auto a = rec_.insert_with_rank(key, key, r, Strategy::recursive);
        const auto b = iter_.insert_with_rank(key, key, r, Strategy::iterative);
        const bool expect = !model_.contains(key);
        if (a.inserted != expect || b.inserted != expect)
            return fail("reference", fmt::format("insert {} reported {}/{}, expected {}", key, a.inserted,
                                                 b.inserted, expect));
        if (expect) model_.emplace(key, r);
        if (a.stats.path_nodes != b.stats.path_nodes)
            return fail("strategy-equivalence", fmt::format("insert {} path nodes {} vs {}", key,
                                                            a.stats.path_nodes, b.stats.path_nodes));
        return true;
    }

    bool erase(std::int64_t key) {
        const auto a = rec_.erase(key, Strategy::recursive);
        const auto b = iter_.erase(key, Strategy::iterative);
        const bool expect = model_.erase(key) == 1;
        if (a.found() != expect || b.found() != expect)
            return fail("reference", fmt::format("delete {} reported {}/{}, expected {}", key, a.found(),
                                                 b.found(), expect));
        if (expect && (*a.payload != key || *b.payload != key))
            return fail("reference", fmt::format("delete {} returned the wrong payload", key));
        return true;
    }

    bool search(std::int64_t key) {
        const auto a = rec_.search(key);
        const auto b = iter_.search(key);
        const bool expect = model_.contains(key);
        if (a.found() != expect || b.found() != expect)
            return fail("reference", fmt::format("search {} reported {}/{}, expected {}", key, a.found(),
                                                 b.found(), expect));
        return true;
    }

    bool after_op() {
        for (const Tree* t : {&rec_, &iter_}) {
            ++report_.checks;
            if (const auto v = t->validate(); !v.empty())
                return fail("invariants", fmt::format("{} tree: {}", t == &rec_ ? "recursive" : "iterative",
                                                      v.front().message));
        }
        ++report_.checks;
        if (!shape_equal(rec_.shape(), iter_.shape()))
            return fail("strategy-equivalence", "recursive and iterative shapes differ");
        if (rec_.size() != model_.size())
            return fail("reference", fmt::format("size {} but reference holds {}", rec_.size(), model_.size()));
        return true;
    }

    bool checkpoint() {
        KeyRankSet<std::int64_t> items(model_.begin(), model_.end());
        const auto shape = rec_.shape();
        ++report_.checks;
        if (!shape_equal(shape, canonical_build(items)))
            return fail("history-independence", "shape differs from the oracle build");

        std::shuffle(items.begin(), items.end(), rng_);
        Tree rebuilt(policy_);
        for (const auto& [k, r] : items) rebuilt.insert_with_rank(k, k, r);
        ++report_.checks;
        if (!shape_equal(shape, rebuilt.shape()))
            return fail("history-independence", "rebuild in shuffled order gives another shape");

        if (policy_.fractional_bits == 0) {
            ++report_.checks;
            const auto back = skiplist_to_tree(tree_to_skiplist(rec_));
            if (!shape_equal(shape, back.shape())) return fail("skip-list", "round trip changed the shape");
        }
        return true;
    }

    std::uint64_t seed_;
    std::size_t target_;
    std::size_t step_ = 0;
    Rng rng_;
    RankPolicy policy_;
    Tree rec_, iter_;
    std::map<std::int64_t, Rank> model_;
    VerifyReport& report_;
};

}  // namespace

std::string VerifyReport::text() const {
    std::string out = fmt::format("runs={} operations={} checks={}\n", runs, operations, checks);
    if (failure)
        out += fmt::format("FAIL suite={} seed={} step={}: {}\n", failure->suite, failure->seed, failure->step,
                           failure->detail);
    else
        out += "PASS\n";
    return out;
}

VerifyReport run_verify(const VerifyOptions& options) {
    options.policy.check();
    VerifyReport report;
    if (options.sizes.empty()) return report;
    const auto live = static_cast<std::size_t>(
        std::count_if(options.sizes.begin(), options.sizes.end(), [](std::size_t s) { return s > 0; }));
    const std::size_t per_size = live == 0 ? 0 : options.iterations / live;
    std::size_t remainder = live == 0 ? 0 : options.iterations % live;
    std::uint64_t index = 0;
    for (const std::size_t size : options.sizes) {
        // Empty targets get one vacuous run; others split their budget into
        // runs of bounded length so failures come with a short replay.
        std::size_t left = 0;
        if (size > 0) {
            left = per_size + (remainder > 0 ? 1 : 0);
            if (remainder > 0) --remainder;
        }
        do {
            const std::size_t ops = std::min(left, kRunLength);
            ++report.runs;
            Run run(derive_seed(options.seed, index++), size, options.policy, report);
            if (!run.go(size == 0 ? 0 : ops)) return report;
            left -= ops;
        } while (left > 0);
    }
    return report;
}

VerifyReport verify_fixture(std::string_view dump_text, const RankPolicy& policy) {
    VerifyReport report;
    report.runs = 1;
    const auto shape = parse_shape<std::int64_t>(std::string(dump_text));
    const auto tree = ZipTree<std::int64_t>::from_shape(shape, policy);
    const auto violations = tree.validate();
    ++report.checks;
    if (!violations.empty()) {
        std::string detail;
        for (const auto& v : violations) {
            if (!detail.empty()) detail += "; ";
            detail += fmt::format("{}: {}", to_string(v.kind), v.message);
        }
        report.failure = VerifyFailure{"fixture", 0, 0, std::move(detail)};
    }
    return report;
}

}  // namespace ziptree
