#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ziptree/experiments.hpp"

namespace ziptree {

/// One measured quantity of one experiment run.
struct Record {
    std::string experiment;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string metric;
    SummaryStats stats;
    std::optional<double> bound;  ///< absent for descriptive rows
    std::optional<bool> pass;     ///< set exactly when bound is
};

/// Names accepted by run_experiment, in a fixed order.
std::span<const std::string_view> experiment_names();

/// Runs the named experiment and flattens its results into records. Throws
/// std::invalid_argument for an unknown name.
std::vector<Record> run_experiment(std::string_view name, const ExperimentConfig& cfg);

/// Header plus one line per record:
/// experiment,n,trials,seed,metric,mean,stddev,max,samples,bound,pass
/// Reals are printed with six decimals; absent bound/pass are empty fields.
std::string format_csv(std::span<const Record> records);

/// A JSON array with one object per record, keys in CSV column order and
/// null for absent bound/pass.
std::string format_json(std::span<const Record> records);

}  // namespace ziptree
