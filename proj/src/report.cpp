#include "ziptree/report.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace ziptree {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"depth",       "root_rank", "update_cost",
                                                    "descendants", "ties",      "treap"};

constexpr std::uint32_t kTailBuckets = 10;

class Emitter {
public:
    Emitter(std::string_view experiment, const ExperimentConfig& cfg, std::vector<Record>& out)
        : experiment_(experiment), cfg_(cfg), out_(out) {}

    void add(std::string metric, const SummaryStats& s, std::optional<double> bound = std::nullopt) {
        Record r;
        r.experiment = experiment_;
        r.n = cfg_.n;
        r.trials = cfg_.trials;
        r.seed = cfg_.seed;
        r.metric = std::move(metric);
        r.stats = s;
        r.bound = bound;
        if (bound) r.pass = within_bound(s, *bound);
        out_.push_back(std::move(r));
    }

    /// Fraction of samples with value >= k, for k = 1..kTailBuckets.
    void tail(std::string_view metric, const Histogram& h) {
        std::uint64_t total = 0;
        for (auto c : h) total += c;
        for (std::uint32_t k = 1; k <= kTailBuckets; ++k) {
            std::uint64_t at_least = 0;
            for (std::size_t i = k; i < h.size(); ++i) at_least += h[i];
            SummaryStats s;
            s.count = total;
            s.mean = total == 0 ? 0.0 : static_cast<double>(at_least) / static_cast<double>(total);
            s.max = s.mean;
            add(fmt::format("{}_tail_ge_{}", metric, k), s);
        }
    }

private:
    std::string_view experiment_;
    const ExperimentConfig& cfg_;
    std::vector<Record>& out_;
};

std::string real(double x) { return fmt::format("{:.6f}", x); }

}  // namespace

std::span<const std::string_view> experiment_names() { return kNames; }

std::vector<Record> run_experiment(std::string_view name, const ExperimentConfig& cfg) {
    std::vector<Record> out;
    Emitter e(name, cfg, out);
    if (name == "depth") {
        e.add("node_depth", depth_experiment(cfg), depth_bound(cfg.n));
    } else if (name == "root_rank") {
        e.add("root_rank", root_rank_experiment(cfg), root_rank_bound(cfg.n));
    } else if (name == "update_cost") {
        const auto r = update_cost_experiment(cfg);
        e.add("insert_path_nodes", r.insert_path);
        e.add("delete_path_nodes", r.delete_path);
        for (std::uint32_t k = 0; k < r.insert_path_by_rank.size(); ++k)
            e.add(fmt::format("insert_path_nodes_rank_{}", k), r.insert_path_by_rank[k], path_nodes_bound(k));
        for (std::uint32_t k = 0; k < r.delete_path_by_rank.size(); ++k)
            e.add(fmt::format("delete_path_nodes_rank_{}", k), r.delete_path_by_rank[k], path_nodes_bound(k));
        e.add("link_writes", r.link_writes, kLinkWritesBound);
        e.tail("link_writes", r.link_write_counts);
        e.tail("path_nodes", r.path_node_counts);
    } else if (name == "descendants") {
        const auto r = descendant_experiment(cfg);
        e.add("descendants", r.all, depth_bound(cfg.n));
        for (std::uint32_t k = 0; k < r.by_rank.size(); ++k)
            e.add(fmt::format("descendants_rank_{}", k), r.by_rank[k], descendants_bound(k));
    } else if (name == "ties") {
        const auto r = tie_experiment(cfg);
        e.add("ties_smaller_keys", r.low, kTiesPerSideBound);
        e.add("ties_larger_keys", r.high, kTiesPerSideBound);
        e.add("ties_total", r.total);
    } else if (name == "treap") {
        const auto zip = depth_experiment(cfg);
        const auto treap = treap_depth_baseline(cfg);
        e.add("zip_depth", zip);
        e.add("treap_depth", treap);
        SummaryStats ratio;
        ratio.count = cfg.trials;
        ratio.mean = ratio.max = zip.mean / treap.mean;
        e.add("depth_ratio", ratio);
    } else {
        throw std::invalid_argument(fmt::format("unknown experiment '{}'", name));
    }
    return out;
}

std::string format_csv(std::span<const Record> records) {
    std::string out = "experiment,n,trials,seed,metric,mean,stddev,max,samples,bound,pass\n";
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.experiment, r.n, r.trials, r.seed, r.metric,
                           real(r.stats.mean), real(r.stats.stddev), real(r.stats.max), r.stats.count,
                           r.bound ? real(*r.bound) : "", r.pass ? (*r.pass ? "true" : "false") : "");
    }
    return out;
}

std::string format_json(std::span<const Record> records) {
    // Reals go through the same fixed-precision text as the CSV so both
    // formats carry identical values.
    auto number = [](double x) { return nlohmann::ordered_json::parse(real(x)); };
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        j["n"] = r.n;
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        j["metric"] = r.metric;
        j["mean"] = number(r.stats.mean);
        j["stddev"] = number(r.stats.stddev);
        j["max"] = number(r.stats.max);
        j["samples"] = r.stats.count;
        j["bound"] = r.bound ? number(*r.bound) : nlohmann::ordered_json();
        j["pass"] = r.pass ? nlohmann::ordered_json(*r.pass) : nlohmann::ordered_json();
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace ziptree
