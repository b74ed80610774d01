// Command-line front end: invariant suites, experiment tables, script traces.
//
// Exit status: 0 pass, 1 invariant failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ziptree/experiments.hpp"
#include "ziptree/report.hpp"
#include "ziptree/trace.hpp"
#include "ziptree/verify.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kInvariantFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// "0.5", "1/3" or any decimal in (0, 1).
double parse_probability(const std::string& text) {
    double value = 0;
    try {
        std::size_t used = 0;
        if (const auto slash = text.find('/'); slash != std::string::npos) {
            const double num = std::stod(text.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(text);
            const std::string den_text = text.substr(slash + 1);
            const double den = std::stod(den_text, &used);
            if (used != den_text.size() || den == 0) throw std::invalid_argument(text);
            value = num / den;
        } else {
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw UsageError(fmt::format("--p: cannot parse '{}'", text));
    }
    if (!(value > 0 && value < 1)) throw UsageError(fmt::format("--p: {} is not in (0, 1)", text));
    return value;
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError(fmt::format("cannot write '{}'", out_path));
    out << text;
    if (!out.flush()) throw UsageError(fmt::format("cannot write '{}'", out_path));
}

struct CommonFlags {
    std::uint64_t seed = 1;
    std::string p = "1/2";
    unsigned frac_bits = 0;
    std::string out;

    void attach(CLI::App* app) {
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
        app->add_option("--p", p, "Rank continuation probability, e.g. 0.5 or 1/3")->capture_default_str();
        app->add_option("--frac-bits", frac_bits, "Fractional rank bits")
            ->check(CLI::Range(0u, 64u))
            ->capture_default_str();
        app->add_option("--out", out, "Write output to PATH instead of stdout");
    }

    [[nodiscard]] ziptree::RankPolicy policy() const {
        ziptree::RankPolicy pol;
        pol.p = parse_probability(p);
        pol.fractional_bits = static_cast<std::uint8_t>(frac_bits);
        pol.seed = seed;
        return pol;
    }
};

const std::map<std::string, ziptree::Strategy> kStrategies{{"rec", ziptree::Strategy::recursive},
                                                           {"iter", ziptree::Strategy::iterative}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zip tree tools: invariant suites, experiments and traces"};
    app.require_subcommand(1);

    CommonFlags verify_flags, bench_flags, trace_flags;

    auto* verify = app.add_subcommand("verify", "Run randomized invariant suites or validate a fixture");
    verify_flags.attach(verify);
    ziptree::VerifyOptions vopt;
    std::string fixture;
    verify->add_option("--sizes", vopt.sizes, "Target tree sizes")->delimiter(',')->capture_default_str();
    verify->add_option("--iterations", vopt.iterations, "Operations across all sizes")->capture_default_str();
    verify->add_option("--fixture", fixture, "Validate a structure dump instead");

    auto* bench = app.add_subcommand("bench", "Run one experiment and print its records");
    bench_flags.attach(bench);
    std::string experiment;
    ziptree::ExperimentConfig cfg;
    cfg.n = 1 << 14;
    cfg.trials = 30;
    std::string format = "csv";
    ziptree::Strategy bench_strategy = ziptree::Strategy::iterative;
    std::vector<std::string> names;
    for (auto name : ziptree::experiment_names()) names.emplace_back(name);
    bench->add_option("experiment", experiment, "Experiment name")->required()->check(CLI::IsMember(names));
    bench->add_option("--n", cfg.n, "Tree size")->capture_default_str();
    bench->add_option("--trials", cfg.trials, "Independent trials")->capture_default_str();
    bench->add_option("--strategy", bench_strategy, "Update algorithm: rec or iter")
        ->transform(CLI::CheckedTransformer(kStrategies));
    bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    auto* trace = app.add_subcommand("trace", "Apply an operation script and print results and dumps");
    trace_flags.attach(trace);
    std::string script_path;
    ziptree::Strategy trace_strategy = ziptree::Strategy::iterative;
    trace->add_option("script", script_path, "Script file, or - for stdin")->required();
    trace->add_option("--strategy", trace_strategy, "Update algorithm: rec or iter")
        ->transform(CLI::CheckedTransformer(kStrategies));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*verify) {
            vopt.seed = verify_flags.seed;
            vopt.policy = verify_flags.policy();
            const auto report =
                fixture.empty() ? ziptree::run_verify(vopt) : ziptree::verify_fixture(read_file(fixture), vopt.policy);
            emit(report.text(), verify_flags.out);
            return report.passed() ? kPass : kInvariantFailure;
        }
        if (*bench) {
            cfg.seed = bench_flags.seed;
            cfg.policy = bench_flags.policy();
            cfg.strategy = bench_strategy;
            if (cfg.n < 2 || cfg.trials < 1) throw UsageError("--n must be at least 2 and --trials at least 1");
            const auto records = ziptree::run_experiment(experiment, cfg);
            emit(format == "json" ? ziptree::format_json(records) : ziptree::format_csv(records), bench_flags.out);
            return kPass;
        }
        if (*trace) {
            const auto script = ziptree::parse_script(read_file(script_path));
            emit(ziptree::run_trace(script, trace_strategy, trace_flags.policy()), trace_flags.out);
            return kPass;
        }
    } catch (const ziptree::InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << '\n';
        return kInvariantFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
