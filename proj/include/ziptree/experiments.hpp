#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ziptree/rank.hpp"
#include "ziptree/zip_tree.hpp"

namespace ziptree {

struct ExperimentConfig {
    std::size_t n = 2;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    RankPolicy policy{};
    Strategy strategy = Strategy::iterative;

    /// Throws std::invalid_argument unless n >= 2, trials >= 1 and the policy
    /// is valid.
    void check() const;
};

struct SummaryStats {
    double mean = 0;
    double stddev = 0;  ///< sample standard deviation
    double max = 0;
    std::uint64_t count = 0;

    [[nodiscard]] double standard_error() const;
};

/// Running mean and variance (Welford).
class Accumulator {
public:
    void add(double x) noexcept;
    [[nodiscard]] SummaryStats summary() const noexcept;
    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
    double max_ = 0;
};

/// A tree built for measurement failed validate().
class InvariantFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Histogram = std::vector<std::uint64_t>;

/// Depth of every node of `trials` trees over n uniform random distinct keys.
SummaryStats depth_experiment(const ExperimentConfig& cfg);

/// Integer rank of the root, one sample per tree.
SummaryStats root_rank_experiment(const ExperimentConfig& cfg);

struct UpdateCostReport {
    SummaryStats insert_path;   ///< nodes on each unzipped path
    SummaryStats delete_path;   ///< nodes on both zipped spines
    SummaryStats link_writes;   ///< every update, inserts and deletes pooled
    std::vector<SummaryStats> insert_path_by_rank;  ///< index = integer rank
    std::vector<SummaryStats> delete_path_by_rank;
    Histogram link_write_counts;  ///< index = link writes of one update
    Histogram path_node_counts;   ///< index = path nodes of one update
};

/// Builds n nodes, then runs n rounds of (delete a uniform random present
/// key, insert a fresh key) and measures only those 2n updates.
UpdateCostReport update_cost_experiment(const ExperimentConfig& cfg);

struct DescendantReport {
    SummaryStats all;                    ///< subtree size including the node
    std::vector<SummaryStats> by_rank;  ///< index = integer rank
};

DescendantReport descendant_experiment(const ExperimentConfig& cfg);

struct TieReport {
    SummaryStats low;    ///< equal full rank, smaller key, per insertion
    SummaryStats high;   ///< equal full rank, larger key, per insertion
    SummaryStats total;
};

/// For each insertion into a growing tree, counts nodes on the key's search
/// path (search and unzip together) whose full rank equals the new rank.
TieReport tie_experiment(const ExperimentConfig& cfg);

/// Node depths of rotation treaps over the same key workload, with
/// independent uniform 64-bit priorities.
SummaryStats treap_depth_baseline(const ExperimentConfig& cfg);

// Bounds used for pass/fail columns.
double depth_bound(std::size_t n);
double root_rank_bound(std::size_t n);
double path_nodes_bound(std::uint32_t k);
double descendants_bound(std::uint32_t k);
inline constexpr double kLinkWritesBound = 4.0;
inline constexpr double kTiesPerSideBound = 1.0;

/// mean <= bound + sigmas * standard error.
bool within_bound(const SummaryStats& s, double bound, double sigmas = 3.0);

}  // namespace ziptree
