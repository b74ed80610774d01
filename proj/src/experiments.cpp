#include "ziptree/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ziptree {

namespace {

using Tree = ZipTree<std::uint64_t>;

struct TrialSeeds {
    std::uint64_t keys;
    std::uint64_t ranks;
};

TrialSeeds seeds_for(const ExperimentConfig& cfg, std::size_t trial) {
    const std::uint64_t s = derive_seed(cfg.seed, trial);
    return {derive_seed(s, 0), derive_seed(s, 1)};
}

Tree empty_tree(const ExperimentConfig& cfg, const TrialSeeds& seeds) {
    RankPolicy pol = cfg.policy;
    if (pol.mode == RankMode::stored) pol.seed = seeds.ranks;
    return Tree(pol);
}

std::uint64_t fresh_key(Rng& keys, const Tree& t) {
    for (;;) {
        const std::uint64_t k = keys();
        if (!t.contains(k)) return k;
    }
}

/// The first n distinct values of the key generator seeded with `seed`.
std::vector<std::uint64_t> key_stream(std::uint64_t seed, std::size_t n) {
    Rng keys(seed);
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> out;
    out.reserve(n);
    while (out.size() < n) {
        const std::uint64_t k = keys();
        if (seen.insert(k).second) out.push_back(k);
    }
    return out;
}

void require_valid(const Tree& t, const char* where) {
    const auto v = t.validate();
    if (!v.empty()) throw InvariantFailure(std::string(where) + ": " + v.front().message);
}

/// n uniform random distinct keys inserted in arrival order.
Tree build_tree(const ExperimentConfig& cfg, const TrialSeeds& seeds, std::vector<std::uint64_t>* keys_out = nullptr) {
    Tree t = empty_tree(cfg, seeds);
    auto keys = key_stream(seeds.keys, cfg.n);
    for (auto k : keys) t.insert(k, {}, cfg.strategy);
    if (keys_out != nullptr) *keys_out = std::move(keys);
    return t;
}

void add_at(std::vector<Accumulator>& by_rank, std::size_t k, double x) {
    if (k >= by_rank.size()) by_rank.resize(k + 1);
    by_rank[k].add(x);
}

void bump(Histogram& h, std::size_t i) {
    if (i >= h.size()) h.resize(i + 1, 0);
    ++h[i];
}

std::vector<SummaryStats> summaries(const std::vector<Accumulator>& acc) {
    std::vector<SummaryStats> out;
    out.reserve(acc.size());
    for (const auto& a : acc) out.push_back(a.summary());
    return out;
}

class Treap {
public:
    void insert(std::uint64_t key, std::uint64_t priority) {
        nodes_.push_back({key, priority, -1, -1});
        root_ = insert(root_, static_cast<std::int32_t>(nodes_.size() - 1));
    }

    template <class F>
    void visit_depths(F&& f) const {
        std::vector<std::pair<std::int32_t, std::size_t>> stack;
        if (root_ >= 0) stack.emplace_back(root_, 0);
        while (!stack.empty()) {
            auto [i, d] = stack.back();
            stack.pop_back();
            f(d);
            const auto& n = nodes_[static_cast<std::size_t>(i)];
            if (n.left >= 0) stack.emplace_back(n.left, d + 1);
            if (n.right >= 0) stack.emplace_back(n.right, d + 1);
        }
    }

private:
    struct Node {
        std::uint64_t key;
        std::uint64_t priority;
        std::int32_t left, right;
    };

    Node& at(std::int32_t i) { return nodes_[static_cast<std::size_t>(i)]; }

    // Max-heap on priority; returns the new subtree root.
    std::int32_t insert(std::int32_t root, std::int32_t x) {
        if (root < 0) return x;
        if (at(x).key < at(root).key) {
            at(root).left = insert(at(root).left, x);
            if (at(at(root).left).priority > at(root).priority) {
                const std::int32_t l = at(root).left;
                at(root).left = at(l).right;
                at(l).right = root;
                return l;
            }
        } else {
            at(root).right = insert(at(root).right, x);
            if (at(at(root).right).priority > at(root).priority) {
                const std::int32_t r = at(root).right;
                at(root).right = at(r).left;
                at(r).left = root;
                return r;
            }
        }
        return root;
    }

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace

void ExperimentConfig::check() const {
    if (n < 2) throw std::invalid_argument("experiment: n must be at least 2");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be at least 1");
    policy.check();
}

double SummaryStats::standard_error() const {
    return count == 0 ? 0.0 : stddev / std::sqrt(static_cast<double>(count));
}

void Accumulator::add(double x) noexcept {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
    max_ = count_ == 1 ? x : std::max(max_, x);
}

SummaryStats Accumulator::summary() const noexcept {
    SummaryStats s;
    s.count = count_;
    s.mean = mean_;
    s.max = max_;
    s.stddev = count_ > 1 ? std::sqrt(m2_ / static_cast<double>(count_ - 1)) : 0.0;
    return s;
}

SummaryStats depth_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    Accumulator acc;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Tree t = build_tree(cfg, seeds_for(cfg, trial));
        require_valid(t, "depth_experiment");
        t.visit([&](const auto&, std::size_t depth) { acc.add(static_cast<double>(depth)); });
    }
    return acc.summary();
}

SummaryStats root_rank_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    Accumulator acc;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Tree t = build_tree(cfg, seeds_for(cfg, trial));
        require_valid(t, "root_rank_experiment");
        acc.add(static_cast<double>(t.root()->rank.integer));
    }
    return acc.summary();
}

UpdateCostReport update_cost_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    Accumulator ins, del, writes;
    std::vector<Accumulator> ins_k, del_k;
    UpdateCostReport r;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const TrialSeeds seeds = seeds_for(cfg, trial);
        std::vector<std::uint64_t> present;
        Tree t = build_tree(cfg, seeds, &present);
        require_valid(t, "update_cost_experiment");
        Rng keys(derive_seed(seeds.keys, 1));
        Rng victims(derive_seed(seeds.keys, 2));
        for (std::size_t round = 0; round < cfg.n; ++round) {
            const std::size_t i = victims.below(present.size());
            const auto e = t.erase(present[i], cfg.strategy);
            const auto d_path = static_cast<double>(e.stats.path_nodes);
            del.add(d_path);
            add_at(del_k, e.rank.integer, d_path);
            writes.add(static_cast<double>(e.stats.link_writes));
            bump(r.link_write_counts, e.stats.link_writes);
            bump(r.path_node_counts, e.stats.path_nodes);

            present[i] = fresh_key(keys, t);
            const auto a = t.insert(present[i], {}, cfg.strategy);
            const auto i_path = static_cast<double>(a.stats.path_nodes);
            ins.add(i_path);
            add_at(ins_k, a.rank.integer, i_path);
            writes.add(static_cast<double>(a.stats.link_writes));
            bump(r.link_write_counts, a.stats.link_writes);
            bump(r.path_node_counts, a.stats.path_nodes);
        }
        require_valid(t, "update_cost_experiment");
    }
    r.insert_path = ins.summary();
    r.delete_path = del.summary();
    r.link_writes = writes.summary();
    r.insert_path_by_rank = summaries(ins_k);
    r.delete_path_by_rank = summaries(del_k);
    return r;
}

DescendantReport descendant_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    Accumulator all;
    std::vector<Accumulator> by_k;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Tree t = build_tree(cfg, seeds_for(cfg, trial));
        require_valid(t, "descendant_experiment");
        // Postorder sizes via an explicit stack.
        using N = Tree::node_type;
        std::vector<std::pair<const N*, bool>> stack;
        std::vector<std::size_t> sizes;
        if (t.root() != nullptr) stack.emplace_back(t.root(), false);
        while (!stack.empty()) {
            auto [n, expanded] = stack.back();
            stack.pop_back();
            if (!expanded) {
                stack.emplace_back(n, true);
                if (n->right != nullptr) stack.emplace_back(n->right, false);
                if (n->left != nullptr) stack.emplace_back(n->left, false);
                continue;
            }
            std::size_t size = 1;
            if (n->left != nullptr) {
                size += sizes.back();
                sizes.pop_back();
            }
            if (n->right != nullptr) {
                size += sizes.back();
                sizes.pop_back();
            }
            sizes.push_back(size);
            all.add(static_cast<double>(size));
            add_at(by_k, n->rank.integer, static_cast<double>(size));
        }
    }
    return {all.summary(), summaries(by_k)};
}

TieReport tie_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    Accumulator low, high, total;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const TrialSeeds seeds = seeds_for(cfg, trial);
        Tree t = empty_tree(cfg, seeds);
        for (const std::uint64_t k : key_stream(seeds.keys, cfg.n)) {
            const Rank r = t.next_rank(k);
            std::size_t lo = 0, hi = 0;
            for (auto* n = t.root(); n != nullptr; n = k < n->key ? n->left : n->right) {
                if (n->rank == r) ++(n->key < k ? lo : hi);
            }
            low.add(static_cast<double>(lo));
            high.add(static_cast<double>(hi));
            total.add(static_cast<double>(lo + hi));
            t.insert_with_rank(k, {}, r, cfg.strategy);
        }
        require_valid(t, "tie_experiment");
    }
    return {low.summary(), high.summary(), total.summary()};
}

SummaryStats treap_depth_baseline(const ExperimentConfig& cfg) {
    cfg.check();
    // At p = 1/2 a uniform 64-bit priority whose leading one-bits number
    // exactly the node's zip-tree rank is still uniform, so each treap shares
    // its randomness with the zip tree of the same trial.
    const bool coupled = cfg.policy.p == 0.5 && cfg.policy.mode == RankMode::stored;
    Accumulator acc;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const TrialSeeds seeds = seeds_for(cfg, trial);
        Rng priorities(derive_seed(seeds.ranks, 1));
        Treap treap;
        if (coupled) {
            const Tree zip = build_tree(cfg, seeds);
            zip.for_each([&](const auto& n) {
                const std::uint32_t k = std::min<std::uint32_t>(n.rank.integer, 63);
                const std::uint64_t ones = k == 0 ? 0 : ~std::uint64_t{0} << (64 - k);
                const std::uint64_t low = priorities() >> (k + 1);
                treap.insert(n.key, ones | low);
            });
        } else {
            for (auto k : key_stream(seeds.keys, cfg.n)) treap.insert(k, priorities());
        }
        treap.visit_depths([&](std::size_t d) { acc.add(static_cast<double>(d)); });
    }
    return acc.summary();
}

double depth_bound(std::size_t n) { return 1.5 * std::log2(static_cast<double>(n)) + 3.0; }
double root_rank_bound(std::size_t n) { return std::log2(static_cast<double>(n)) + 3.0; }
double path_nodes_bound(std::uint32_t k) { return 1.5 * k + 0.5; }
double descendants_bound(std::uint32_t k) { return 3.0 * std::ldexp(1.0, static_cast<int>(k)) - 1.0; }

bool within_bound(const SummaryStats& s, double bound, double sigmas) {
    return s.mean <= bound + sigmas * s.standard_error();
}

}  // namespace ziptree
