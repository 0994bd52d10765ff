#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dgs/degree_model.hpp"

namespace dgs {

// Parsed experiment description. `kind` selects the pipeline:
//   spectrum        sample graphs, record full spectra
//   verify-bound    |lambda2| <= rho_tilde + epsilon across seeds
//   decomposition   exact path-decomposition residual on tangle-free seeds
//   oracle          exhaustive expectation identity (+ optional proto-paths)
//   mixing          TV mixing traces and the k-th-root rate estimate
//   tangle-census   fraction of t-tangle-free samples, optionally over an n sweep
//   norm-report     measured cut/rest norms against the bound shapes
struct ExperimentConfig {
    int schema_version = 1;
    std::string kind;

    // Degree model: exactly one of the three is active.
    enum class DegreesMode { types, file, regular };
    DegreesMode degrees_mode = DegreesMode::regular;
    std::vector<DegreeType> types;
    std::string degrees_file;
    int regular_n = 0;
    int regular_d = 0;

    std::vector<long long> n_sweep; // optional; empty = single size

    std::uint64_t seed_root = 1;
    int trials = 1;
    double epsilon = 0.1;
    int t = 0;            // 0 = auto: ceil(alpha log_Delta n)
    double alpha = 0.24;
    double c = 2.0;
    std::vector<int> D = {2};
    int k_max = 50;
    bool svg = false;
    long long enum_cap = 10'000'000;
    int oracle_cap = 8;
    double residual_tol = 1e-9;
    double min_fraction = 0.0;  // verify-bound: 0 = report-only
    long long scan_limit = 0;   // decomposition: scan the seed stream for up
                                // to this many samples and keep the first
                                // `trials` tangle-free ones; 0 = evaluate the
                                // first `trials` seeds as-is
    std::vector<std::string> proto_paths;
    std::string out_dir = "out";
};

// JSON text -> config. Unknown keys anywhere are ConfigError naming the
// key; missing/mistyped fields name the field; syntax errors carry the
// parser's location.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RunOptions {
    std::optional<std::uint64_t> seed_root; // --seed-root override
    std::optional<std::string> out_dir;     // --out override
    int jobs = 0;                           // 0 = hardware concurrency
};

// Runs the experiment, writes trials.csv / summary.csv (and per-seed
// artifacts) under the output directory. Returns 0 on success, 1 when the
// experiment's own verification failed. Throws ConfigError/IoError for
// malformed setups.
int run_experiment(const ExperimentConfig& config, const RunOptions& options,
                   std::ostream& log);

// The `oracle <proto-path-file>` entry point: degree block + proto-path
// literals in, oracle_report.csv out. Returns 0/1 like run_experiment.
int run_oracle_file(const std::string& path, const std::string& out_dir,
                    double c, std::ostream& log);

// Built-in invariant suite behind `digraph-spectra check`.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> run_self_checks();

} // namespace dgs
