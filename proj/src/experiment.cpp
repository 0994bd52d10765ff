#include "dgs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dgs/config_sampler.hpp"
#include "dgs/errors.hpp"
#include "dgs/format.hpp"
#include "dgs/matching_oracle.hpp"
#include "dgs/path_calculus.hpp"
#include "dgs/perturbation.hpp"
#include "dgs/rng.hpp"
#include "dgs/spectrum.hpp"
#include "dgs/tangle.hpp"
#include "dgs/transition.hpp"
#include "dgs/walk_lab.hpp"

namespace dgs {

namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key `" + item.key() + "` in " + where);
    }
}

template <typename T>
T get_field(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key))
        throw ConfigError("missing key `" + std::string(key) + "` in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for `" + std::string(key) + "` in " + where +
                          ": " + e.what());
    }
}

template <typename T>
void get_optional(const json& obj, const std::string& where, const char* key, T& out) {
    if (obj.contains(key)) out = get_field<T>(obj, where, key);
}

const std::vector<std::string> kKinds = {
    "spectrum",  "verify-bound", "decomposition", "oracle",
    "mixing",    "tangle-census", "norm-report"};

} // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    expect_keys(root, "config root",
                {"schema_version", "kind", "degrees", "n_sweep", "seed_root",
                 "trials", "epsilon", "t", "alpha", "c", "D", "k_max", "svg",
                 "enum_cap", "oracle_cap", "residual_tol", "min_fraction",
                 "scan_limit", "proto_paths", "out_dir"});

    ExperimentConfig cfg;
    cfg.schema_version = get_field<int>(root, "config root", "schema_version");
    if (cfg.schema_version != 1)
        throw ConfigError("unsupported schema_version " +
                          std::to_string(cfg.schema_version) + " (expected 1)");
    cfg.kind = get_field<std::string>(root, "config root", "kind");
    if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end())
        throw ConfigError("unknown kind `" + cfg.kind + "`");

    if (!root.contains("degrees"))
        throw ConfigError("missing key `degrees` in config root");
    const json& deg = root.at("degrees");
    if (!deg.is_object()) throw ConfigError("`degrees` must be an object");
    expect_keys(deg, "degrees", {"types", "file", "regular"});
    const int given = static_cast<int>(deg.contains("types")) +
                      static_cast<int>(deg.contains("file")) +
                      static_cast<int>(deg.contains("regular"));
    if (given != 1)
        throw ConfigError("`degrees` needs exactly one of types/file/regular");
    if (deg.contains("types")) {
        cfg.degrees_mode = ExperimentConfig::DegreesMode::types;
        for (const auto& row : deg.at("types")) {
            if (!row.is_array() || row.size() != 3)
                throw ConfigError("each degrees.types row is [count, d_plus, d_minus]");
            cfg.types.push_back(DegreeType{row.at(0).get<long long>(),
                                           row.at(1).get<int>(),
                                           row.at(2).get<int>()});
        }
    } else if (deg.contains("file")) {
        cfg.degrees_mode = ExperimentConfig::DegreesMode::file;
        cfg.degrees_file = get_field<std::string>(deg, "degrees", "file");
    } else {
        cfg.degrees_mode = ExperimentConfig::DegreesMode::regular;
        const json& reg = deg.at("regular");
        if (!reg.is_object()) throw ConfigError("`degrees.regular` must be an object");
        expect_keys(reg, "degrees.regular", {"n", "d"});
        cfg.regular_n = get_field<int>(reg, "degrees.regular", "n");
        cfg.regular_d = get_field<int>(reg, "degrees.regular", "d");
    }

    get_optional(root, "config root", "n_sweep", cfg.n_sweep);
    get_optional(root, "config root", "seed_root", cfg.seed_root);
    get_optional(root, "config root", "trials", cfg.trials);
    get_optional(root, "config root", "epsilon", cfg.epsilon);
    get_optional(root, "config root", "t", cfg.t);
    get_optional(root, "config root", "alpha", cfg.alpha);
    get_optional(root, "config root", "c", cfg.c);
    get_optional(root, "config root", "D", cfg.D);
    get_optional(root, "config root", "k_max", cfg.k_max);
    get_optional(root, "config root", "svg", cfg.svg);
    get_optional(root, "config root", "enum_cap", cfg.enum_cap);
    get_optional(root, "config root", "oracle_cap", cfg.oracle_cap);
    get_optional(root, "config root", "residual_tol", cfg.residual_tol);
    get_optional(root, "config root", "min_fraction", cfg.min_fraction);
    get_optional(root, "config root", "scan_limit", cfg.scan_limit);
    get_optional(root, "config root", "proto_paths", cfg.proto_paths);
    get_optional(root, "config root", "out_dir", cfg.out_dir);

    if (cfg.trials < 1) throw ConfigError("`trials` must be >= 1");
    if (cfg.t < 0) throw ConfigError("`t` must be >= 0 (0 = automatic)");
    if (cfg.k_max < 1) throw ConfigError("`k_max` must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

std::vector<DegreeType> compress_to_types(const DegreeSequence& seq) {
    std::vector<DegreeType> types;
    int i = 0;
    while (i < seq.n()) {
        int j = i;
        while (j < seq.n() && seq.d_plus[j] == seq.d_plus[i] &&
               seq.d_minus[j] == seq.d_minus[i])
            ++j;
        types.push_back(DegreeType{j - i, seq.d_plus[i], seq.d_minus[i]});
        i = j;
    }
    return types;
}

// The degree sequence for one sweep size (or the base size when n == 0).
DegreeSequence resolve_degrees(const ExperimentConfig& cfg, long long n) {
    if (cfg.degrees_mode == ExperimentConfig::DegreesMode::regular) {
        const long long base = cfg.regular_n;
        return regular(static_cast<int>(n == 0 ? base : n), cfg.regular_d);
    }
    std::vector<DegreeType> types = cfg.degrees_mode == ExperimentConfig::DegreesMode::file
                                        ? compress_to_types(load_degrees(cfg.degrees_file))
                                        : cfg.types;
    long long base = 0;
    for (const auto& t : types) base += t.count;
    if (n == 0 || n == base) return from_types(types);
    if (n % base != 0)
        throw ConfigError("sweep size " + std::to_string(n) +
                          " is not a multiple of the base vertex count " +
                          std::to_string(base));
    const long long factor = n / base;
    for (auto& t : types) t.count *= factor;
    return from_types(types);
}

void parallel_trials(int trials, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, trials));
    if (jobs == 1) {
        for (int i = 0; i < trials; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= trials) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
}

// Nearest-rank quantile on an already sorted vector.
double quantile(const std::vector<double>& sorted, double p) {
    const int n = static_cast<int>(sorted.size());
    const int rank = std::clamp(static_cast<int>(std::ceil(p * n)) - 1, 0, n - 1);
    return sorted[rank];
}

struct SummaryBuilder {
    std::ostringstream out;
    SummaryBuilder() { out << "stat,value\n"; }
    void add(const std::string& name, const std::string& value) {
        out << name << ',' << value << '\n';
    }
    void add(const std::string& name, double value) { add(name, format_double(value)); }
    void add_count(const std::string& name, long long value) {
        add(name, std::to_string(value));
    }
    void add_distribution(const std::string& prefix, std::vector<double> values) {
        std::sort(values.begin(), values.end());
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        add(prefix + "_mean", mean);
        add(prefix + "_q05", quantile(values, 0.05));
        add(prefix + "_q25", quantile(values, 0.25));
        add(prefix + "_median", quantile(values, 0.50));
        add(prefix + "_q75", quantile(values, 0.75));
        add(prefix + "_q95", quantile(values, 0.95));
        add(prefix + "_max", values.back());
    }
};

int effective_t(const ExperimentConfig& cfg, const DegreeSequence& seq) {
    if (cfg.t > 0) return cfg.t;
    return default_tangle_radius(seq.n(), seq.max_degree, cfg.alpha);
}

std::string seed_str(std::uint64_t seed) { return std::to_string(seed); }

// ---- kind runners ------------------------------------------------------

struct SpectrumRow {
    std::uint64_t seed;
    double rho_v, rho_tilde_v, lambda2;
    int ramanujan; // -1 when not applicable (non-regular)
};

int run_spectrum(const ExperimentConfig& cfg, const DegreeSequence& seq,
                 const std::string& out_dir, int jobs, std::ostream& log) {
    std::vector<SpectrumRow> rows(cfg.trials);
    std::vector<SpectrumReport> reports(cfg.trials);
    const bool is_regular = cfg.degrees_mode == ExperimentConfig::DegreesMode::regular;
    parallel_trials(cfg.trials, jobs, [&](int i) {
        const std::uint64_t seed = derive_seed(cfg.seed_root, i);
        const Digraph g = build_digraph(seq, sample_environment(seq, seed));
        const SpectrumReport report = compute_spectrum(build_P(g));
        rows[i] = SpectrumRow{seed, report.rho, report.rho_tilde, report.lambda2_mod,
                              is_regular ? (is_ramanujan_digraph(report, cfg.regular_d) ? 1 : 0)
                                         : -1};
        reports[i] = report;
    });

    std::vector<int> order(cfg.trials);
    for (int i = 0; i < cfg.trials; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rows[a].seed < rows[b].seed; });

    std::ostringstream csv;
    csv << "seed,n,m,rho,rho_tilde,lambda2,ramanujan\n";
    for (int i : order) {
        const auto& r = rows[i];
        csv << seed_str(r.seed) << ',' << seq.n() << ',' << seq.total << ','
            << format_double(r.rho_v) << ',' << format_double(r.rho_tilde_v) << ','
            << format_double(r.lambda2) << ','
            << (r.ramanujan < 0 ? std::string() : std::to_string(r.ramanujan)) << '\n';
        if (cfg.svg) {
            save_spectrum_svg(reports[i], rows[i].rho_v, 1.0 / seq.min_degree,
                              out_dir + "/spectrum_seed" + seed_str(r.seed) + ".svg");
            save_spectrum_csv(reports[i],
                              out_dir + "/spectrum_seed" + seed_str(r.seed) + ".csv");
        }
    }
    write_text_file(out_dir + "/trials.csv", csv.str());

    SummaryBuilder summary;
    summary.add_count("trials", cfg.trials);
    std::vector<double> lambda2;
    for (const auto& r : rows) lambda2.push_back(r.lambda2);
    summary.add_distribution("lambda2", lambda2);
    summary.add("rho", rho(seq));
    summary.add("rho_tilde", rho_tilde(seq));
    write_text_file(out_dir + "/summary.csv", summary.out.str());
    log << "spectrum: " << cfg.trials << " trials done\n";
    return 0;
}

struct BoundRow {
    std::uint64_t seed;
    double rho_v, rho_tilde_v, lambda2, threshold, margin;
    bool satisfied;
};

int run_verify_bound(const ExperimentConfig& cfg, const DegreeSequence& seq,
                     const std::string& out_dir, int jobs, std::ostream& log) {
    std::vector<BoundRow> rows(cfg.trials);
    std::vector<SpectrumReport> reports(cfg.trials);
    parallel_trials(cfg.trials, jobs, [&](int i) {
        const std::uint64_t seed = derive_seed(cfg.seed_root, i);
        const Digraph g = build_digraph(seq, sample_environment(seq, seed));
        const SpectrumReport report = compute_spectrum(build_P(g));
        const BoundVerdict verdict = check_main_bound(report, cfg.epsilon);
        rows[i] = BoundRow{seed,          report.rho,     report.rho_tilde,
                           verdict.lambda2_mod, verdict.threshold, verdict.margin,
                           verdict.satisfied};
        reports[i] = report;
    });

    std::vector<int> order(cfg.trials);
    for (int i = 0; i < cfg.trials; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rows[a].seed < rows[b].seed; });

    std::ostringstream csv;
    csv << "seed,n,m,rho,rho_tilde,lambda2,threshold,margin,satisfied\n";
    std::vector<std::uint64_t> outliers;
    int satisfied_count = 0;
    for (int i : order) {
        const auto& r = rows[i];
        csv << seed_str(r.seed) << ',' << seq.n() << ',' << seq.total << ','
            << format_double(r.rho_v) << ',' << format_double(r.rho_tilde_v) << ','
            << format_double(r.lambda2) << ',' << format_double(r.threshold) << ','
            << format_double(r.margin) << ',' << (r.satisfied ? 1 : 0) << '\n';
        if (r.satisfied)
            ++satisfied_count;
        else
            outliers.push_back(r.seed);
        if (cfg.svg)
            save_spectrum_svg(reports[i], rows[i].rho_v, 1.0 / seq.min_degree,
                              out_dir + "/spectrum_seed" + seed_str(r.seed) + ".svg");
    }
    write_text_file(out_dir + "/trials.csv", csv.str());

    const double fraction = static_cast<double>(satisfied_count) / cfg.trials;
    SummaryBuilder summary;
    summary.add_count("trials", cfg.trials);
    summary.add_count("satisfied", satisfied_count);
    summary.add("satisfied_fraction", fraction);
    summary.add("epsilon", cfg.epsilon);
    summary.add("rho_tilde", rho_tilde(seq));
    std::vector<double> lambda2;
    for (const auto& r : rows) lambda2.push_back(r.lambda2);
    summary.add_distribution("lambda2", lambda2);
    std::string joined;
    for (auto s : outliers) {
        if (!joined.empty()) joined += ';';
        joined += seed_str(s);
    }
    summary.add("outlier_seeds", joined);
    write_text_file(out_dir + "/summary.csv", summary.out.str());

    log << "verify-bound: " << satisfied_count << "/" << cfg.trials
        << " trials satisfied |lambda2| <= " << format_double(rho_tilde(seq))
        << " + " << format_double(cfg.epsilon) << "\n";
    if (!outliers.empty()) {
        log << "outliers:";
        for (auto s : outliers) log << ' ' << seed_str(s);
        log << "\n";
    }
    return (cfg.min_fraction > 0.0 && fraction < cfg.min_fraction) ? 1 : 0;
}

int run_decomposition(const ExperimentConfig& cfg, const DegreeSequence& seq,
                      const std::string& out_dir, int jobs, std::ostream& log) {
    const int t = effective_t(cfg, seq);
    struct Row {
        std::uint64_t seed;
        bool tangle_free;
        double residual; // NaN when skipped
    };
    std::vector<Row> rows;
    const EnumLimits limits{cfg.enum_cap};
    if (cfg.scan_limit > 0) {
        // Scan the seed stream for the first `trials` tangle-free samples.
        std::vector<std::uint64_t> keep;
        for (long long k = 0; k < cfg.scan_limit &&
                              keep.size() < static_cast<size_t>(cfg.trials);
             ++k) {
            const std::uint64_t seed = derive_seed(cfg.seed_root, k);
            const Digraph g = build_digraph(seq, sample_environment(seq, seed));
            if (is_d_tangle_free(g, t).tangle_free) keep.push_back(seed);
        }
        rows.resize(keep.size());
        parallel_trials(static_cast<int>(keep.size()), jobs, [&](int i) {
            const Digraph g = build_digraph(seq, sample_environment(seq, keep[i]));
            rows[i] = Row{keep[i], true, decomposition_residual(g, t, limits)};
        });
    } else {
        rows.resize(cfg.trials);
        parallel_trials(cfg.trials, jobs, [&](int i) {
            const std::uint64_t seed = derive_seed(cfg.seed_root, i);
            const Digraph g = build_digraph(seq, sample_environment(seq, seed));
            const TangleWitness tw = is_d_tangle_free(g, t);
            if (tw.tangle_free)
                rows[i] = Row{seed, true, decomposition_residual(g, t, limits)};
            else
                rows[i] = Row{seed, false, std::numeric_limits<double>::quiet_NaN()};
        });
    }

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.seed < b.seed; });
    std::ostringstream csv;
    csv << "seed,n,m,t,tangle_free,residual,ok\n";
    int evaluated = 0, passed = 0;
    double worst = 0.0;
    for (const auto& r : rows) {
        const bool ok = !r.tangle_free || r.residual <= cfg.residual_tol;
        csv << seed_str(r.seed) << ',' << seq.n() << ',' << seq.total << ',' << t
            << ',' << (r.tangle_free ? 1 : 0) << ','
            << (r.tangle_free ? format_double(r.residual) : std::string()) << ','
            << (r.tangle_free ? std::to_string(ok ? 1 : 0) : std::string()) << '\n';
        if (r.tangle_free) {
            ++evaluated;
            if (ok) ++passed;
            worst = std::max(worst, r.residual);
        }
    }
    write_text_file(out_dir + "/trials.csv", csv.str());

    SummaryBuilder summary;
    summary.add_count("trials", static_cast<long long>(rows.size()));
    summary.add_count("tangle_free", evaluated);
    summary.add_count("residual_ok", passed);
    summary.add("residual_tol", cfg.residual_tol);
    summary.add("worst_residual", evaluated > 0 ? worst : 0.0);
    summary.add_count("t", t);
    if (cfg.scan_limit > 0) summary.add_count("requested", cfg.trials);
    write_text_file(out_dir + "/summary.csv", summary.out.str());

    log << "decomposition: " << passed << "/" << evaluated
        << " tangle-free trials within " << format_double(cfg.residual_tol)
        << " (worst " << format_double(evaluated > 0 ? worst : 0.0) << ", t=" << t
        << ")\n";
    const bool short_of_quota =
        cfg.scan_limit > 0 && evaluated < cfg.trials;
    return (passed == evaluated && !short_of_quota) ? 0 : 1;
}

int run_oracle_kind(const ExperimentConfig& cfg, const DegreeSequence& seq,
                    const std::string& out_dir, std::ostream& log) {
    std::ostringstream csv;
    csv << "check,i,j,expected,computed,match\n";
    bool all_match = true;
    const Rational inv_m(1, seq.total);
    for (int i = 0; i < seq.n(); ++i)
        for (int j = 0; j < seq.n(); ++j) {
            const Rational expected = Rational(seq.d_minus[j]) * inv_m;
            const Rational computed = expected_entry(seq, i, j, cfg.oracle_cap);
            const bool match = expected == computed;
            all_match = all_match && match;
            csv << "expected_entry," << i << ',' << j << ',' << expected.to_string()
                << ',' << computed.to_string() << ',' << (match ? 1 : 0) << '\n';
        }

    int violations = 0, checked = 0;
    for (size_t k = 0; k < cfg.proto_paths.size(); ++k) {
        const ProtoPath p = parse_proto_path(seq, cfg.proto_paths[k]);
        const TechBoundVerdict v = tech_bound_check(seq, p, cfg.c, cfg.oracle_cap);
        csv << "proto_bound," << k << ",," << format_double(v.rhs) << ','
            << format_double(v.lhs) << ','
            << ((v.satisfied || !v.in_regime) ? 1 : 0) << '\n';
        if (v.in_regime) {
            ++checked;
            if (!v.satisfied) ++violations;
        }
    }
    write_text_file(out_dir + "/oracle_report.csv", csv.str());

    SummaryBuilder summary;
    summary.add_count("entries_checked", static_cast<long long>(seq.n()) * seq.n());
    summary.add("expectation_identity", all_match ? 1.0 : 0.0);
    summary.add_count("proto_paths_in_regime", checked);
    summary.add_count("proto_bound_violations", violations);
    write_text_file(out_dir + "/summary.csv", summary.out.str());

    log << "oracle: expectation identity " << (all_match ? "holds" : "FAILS")
        << " on all " << seq.n() * seq.n() << " entries";
    if (!cfg.proto_paths.empty())
        log << "; " << violations << "/" << checked
            << " in-regime proto-path bound violations";
    log << "\n";
    return (all_match && violations == 0) ? 0 : 1;
}

int run_mixing(const ExperimentConfig& cfg, const DegreeSequence& seq,
               const std::string& out_dir, int jobs, std::ostream& log) {
    struct Row {
        std::uint64_t seed;
        bool irreducible, aperiodic;
        double lambda2, rate, abs_error;
        std::string trace_csv;
    };
    std::vector<Row> rows(cfg.trials);
    parallel_trials(cfg.trials, jobs, [&](int i) {
        const std::uint64_t seed = derive_seed(cfg.seed_root, i);
        const Digraph g = build_digraph(seq, sample_environment(seq, seed));
        const Eigen::MatrixXd p = build_P(g).probs;
        Row row;
        row.seed = seed;
        row.irreducible = is_irreducible(p);
        row.aperiodic = row.irreducible && chain_period(p) == 1;
        row.lambda2 = compute_spectrum(p).lambda2_mod;
        row.rate = std::numeric_limits<double>::quiet_NaN();
        row.abs_error = std::numeric_limits<double>::quiet_NaN();
        if (row.irreducible) {
            const MixingTrace trace = mixing_trace(p, cfg.k_max);
            row.trace_csv = mixing_trace_to_csv(trace);
            if (row.aperiodic) {
                row.rate = trace.degenerate_zero ? 0.0 : trace.roots.back();
                row.abs_error = std::abs(row.rate - row.lambda2);
            }
        }
        rows[i] = row;
    });

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.seed < b.seed; });
    std::ostringstream csv;
    csv << "seed,n,k_max,irreducible,aperiodic,lambda2,rate,abs_error\n";
    std::vector<double> errors;
    for (const auto& r : rows) {
        csv << seed_str(r.seed) << ',' << seq.n() << ',' << cfg.k_max << ','
            << (r.irreducible ? 1 : 0) << ',' << (r.aperiodic ? 1 : 0) << ','
            << format_double(r.lambda2) << ','
            << (std::isnan(r.rate) ? std::string() : format_double(r.rate)) << ','
            << (std::isnan(r.abs_error) ? std::string() : format_double(r.abs_error))
            << '\n';
        if (!r.trace_csv.empty())
            write_text_file(out_dir + "/mixing_seed" + seed_str(r.seed) + ".csv",
                            r.trace_csv);
        if (!std::isnan(r.abs_error)) errors.push_back(r.abs_error);
    }
    write_text_file(out_dir + "/trials.csv", csv.str());

    SummaryBuilder summary;
    summary.add_count("trials", cfg.trials);
    summary.add_count("rates_estimated", static_cast<long long>(errors.size()));
    if (!errors.empty()) summary.add_distribution("abs_error", errors);
    write_text_file(out_dir + "/summary.csv", summary.out.str());
    log << "mixing: estimated rates for " << errors.size() << "/" << cfg.trials
        << " trials\n";
    return 0;
}

int run_tangle_census(const ExperimentConfig& cfg, const std::string& out_dir,
                      int jobs, std::ostream& log) {
    std::vector<long long> sizes = cfg.n_sweep;
    if (sizes.empty()) sizes.push_back(0); // base size only
    struct Row {
        long long n;
        std::uint64_t seed;
        int t;
        bool tangle_free;
        int witness;
    };
    std::vector<Row> rows;
    SummaryBuilder summary;
    for (long long size : sizes) {
        const DegreeSequence seq = resolve_degrees(cfg, size);
        const int t = effective_t(cfg, seq);
        std::vector<Row> batch(cfg.trials);
        parallel_trials(cfg.trials, jobs, [&](int i) {
            const std::uint64_t seed = derive_seed(cfg.seed_root, i);
            const Digraph g = build_digraph(seq, sample_environment(seq, seed));
            const TangleWitness tw = is_d_tangle_free(g, t);
            batch[i] = Row{seq.n(), seed, t, tw.tangle_free, tw.witness};
        });
        std::sort(batch.begin(), batch.end(),
                  [](const Row& a, const Row& b) { return a.seed < b.seed; });
        int free_count = 0;
        for (const auto& r : batch)
            if (r.tangle_free) ++free_count;
        summary.add("tangle_free_fraction_n" + std::to_string(seq.n()),
                    static_cast<double>(free_count) / cfg.trials);
        log << "tangle-census: n=" << seq.n() << " t=" << t << ": " << free_count
            << "/" << cfg.trials << " tangle-free\n";
        rows.insert(rows.end(), batch.begin(), batch.end());
    }

    std::ostringstream csv;
    csv << "n,seed,t,tangle_free,witness\n";
    for (const auto& r : rows)
        csv << r.n << ',' << seed_str(r.seed) << ',' << r.t << ','
            << (r.tangle_free ? 1 : 0) << ','
            << (r.tangle_free ? std::string() : std::to_string(r.witness)) << '\n';
    write_text_file(out_dir + "/trials.csv", csv.str());
    write_text_file(out_dir + "/summary.csv", summary.out.str());
    return 0;
}

int run_norm_report(const ExperimentConfig& cfg, const DegreeSequence& seq,
                    const std::string& out_dir, int jobs, std::ostream& log) {
    const int t = effective_t(cfg, seq);
    const EnumLimits limits{cfg.enum_cap};
    std::vector<NormBoundReport> reports(cfg.trials);
    std::vector<std::uint64_t> seeds(cfg.trials);
    parallel_trials(cfg.trials, jobs, [&](int i) {
        seeds[i] = derive_seed(cfg.seed_root, i);
        const Digraph g = build_digraph(seq, sample_environment(seq, seeds[i]));
        reports[i] = norm_vs_bound_report(g, t, cfg.c, cfg.D, limits);
    });

    std::vector<int> order(cfg.trials);
    for (int i = 0; i < cfg.trials; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return seeds[a] < seeds[b]; });

    std::ostringstream csv;
    csv << "seed,n,t,object,ell,norm,root";
    for (int d : cfg.D) csv << ",bound_D" << d;
    csv << '\n';
    for (int i : order) {
        const auto& r = reports[i];
        csv << seed_str(seeds[i]) << ',' << r.n << ',' << r.t << ",centered_cut,0,"
            << format_double(r.centered_cut_norm) << ','
            << format_double(r.centered_cut_root);
        for (double b : r.centered_bounds) csv << ',' << format_double(b);
        csv << '\n';
        for (int ell = 1; ell <= t; ++ell) {
            csv << seed_str(seeds[i]) << ',' << r.n << ',' << r.t << ",rest," << ell
                << ',' << format_double(r.rest_norms[ell - 1]) << ',';
            for (double b : r.rest_bounds[ell - 1]) csv << ',' << format_double(b);
            csv << '\n';
        }
    }
    write_text_file(out_dir + "/trials.csv", csv.str());

    SummaryBuilder summary;
    summary.add_count("trials", cfg.trials);
    summary.add_count("t", t);
    summary.add("c", cfg.c);
    std::vector<double> roots;
    for (const auto& r : reports) roots.push_back(r.centered_cut_root);
    summary.add_distribution("centered_cut_root", roots);
    summary.add("rho_tilde", rho_tilde(seq));
    write_text_file(out_dir + "/summary.csv", summary.out.str());
    log << "norm-report: " << cfg.trials << " trials at t=" << t << "\n";
    return 0;
}

} // namespace

int run_experiment(const ExperimentConfig& config, const RunOptions& options,
                   std::ostream& log) {
    ExperimentConfig cfg = config;
    if (options.seed_root) cfg.seed_root = *options.seed_root;
    const std::string out_dir = options.out_dir ? *options.out_dir : cfg.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);
    const int jobs = options.jobs;

    const auto start = std::chrono::steady_clock::now();
    int rc = 0;
    if (cfg.kind == "tangle-census") {
        rc = run_tangle_census(cfg, out_dir, jobs, log);
    } else {
        if (!cfg.n_sweep.empty())
            throw ConfigError("`n_sweep` is only supported by tangle-census");
        const DegreeSequence seq = resolve_degrees(cfg, 0);
        if (cfg.kind == "spectrum")
            rc = run_spectrum(cfg, seq, out_dir, jobs, log);
        else if (cfg.kind == "verify-bound")
            rc = run_verify_bound(cfg, seq, out_dir, jobs, log);
        else if (cfg.kind == "decomposition")
            rc = run_decomposition(cfg, seq, out_dir, jobs, log);
        else if (cfg.kind == "oracle")
            rc = run_oracle_kind(cfg, seq, out_dir, log);
        else if (cfg.kind == "mixing")
            rc = run_mixing(cfg, seq, out_dir, jobs, log);
        else if (cfg.kind == "norm-report")
            rc = run_norm_report(cfg, seq, out_dir, jobs, log);
        else
            throw ConfigError("unknown kind `" + cfg.kind + "`");
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    log << "artifacts in " << out_dir << " (wall time " << elapsed << " ms)\n";
    return rc;
}

int run_oracle_file(const std::string& path, const std::string& out_dir, double c,
                    std::ostream& log) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read proto-path file: " + path);

    std::string line, degrees_text;
    std::vector<std::string> literals;
    enum class Section { none, degrees, paths } section = Section::none;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string trimmed = line.substr(first, last - first + 1);
        if (trimmed == "degrees:") {
            section = Section::degrees;
        } else if (trimmed == "paths:") {
            section = Section::paths;
        } else if (section == Section::degrees) {
            degrees_text += trimmed + "\n";
        } else if (section == Section::paths) {
            literals.push_back(trimmed);
        } else {
            throw IoError("line " + std::to_string(lineno) +
                          ": content before the degrees:/paths: sections");
        }
    }
    if (degrees_text.empty()) throw IoError("proto-path file has no degrees: block");
    const DegreeSequence seq = parse_degrees(degrees_text);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);

    std::ostringstream csv;
    csv << "index,length,split,a,b,a1,simple,omega,F,F_double,c,rhs,in_regime,"
           "satisfied,literal\n";
    int violations = 0, in_regime = 0;
    for (size_t k = 0; k < literals.size(); ++k) {
        const ProtoPath p = parse_proto_path(seq, literals[k]);
        const TechBoundVerdict v = tech_bound_check(seq, p, c);
        csv << k << ',' << p.length() << ',' << p.split << ',' << v.stats.a << ','
            << v.stats.b << ',' << v.stats.a1 << ',' << (v.stats.simple ? 1 : 0)
            << ',' << v.stats.omega.to_string() << ',' << v.f.to_string() << ','
            << format_double(v.f.to_double()) << ',' << format_double(c) << ','
            << format_double(v.rhs) << ',' << (v.in_regime ? 1 : 0) << ','
            << (v.satisfied ? 1 : 0) << ",\"" << literals[k] << "\"\n";
        if (v.in_regime) {
            ++in_regime;
            if (!v.satisfied) ++violations;
        }
    }
    write_text_file(out_dir + "/oracle_report.csv", csv.str());
    log << "oracle: " << literals.size() << " proto-paths, " << in_regime
        << " in regime, " << violations << " bound violations\n";
    return violations == 0 ? 0 : 1;
}

// ---- self checks --------------------------------------------------------

namespace {

CheckResult check(const std::string& name, const std::function<void()>& body) {
    try {
        body();
        return CheckResult{name, true, ""};
    } catch (const std::exception& e) {
        return CheckResult{name, false, e.what()};
    }
}

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}

} // namespace

std::vector<CheckResult> run_self_checks() {
    std::vector<CheckResult> results;

    results.push_back(check("rho_closed_forms", [] {
        require(std::abs(rho(regular(100, 7)) - 1.0 / std::sqrt(7.0)) < 1e-12,
                "regular rho != 1/sqrt(d)");
        const auto mixed = from_types({{100, 2, 2}, {100, 8, 8}});
        require(std::abs(rho(mixed) - std::sqrt(0.2)) < 1e-12, "mixed rho");
        const auto skewed = from_types({{700, 2, 2}, {800, 9, 9}});
        require(std::abs(rho_tilde(skewed) - 0.5) < 1e-12, "rho_tilde != 1/delta");
        const auto fig = from_types({{60, 5, 6}, {60, 3, 7}, {60, 9, 4}});
        require(std::abs(rho(fig) - std::sqrt(179.0 / 765.0)) < 1e-12, "fig rho");
        require(std::abs(rho_tilde(fig) - rho(fig)) < 1e-15, "fig rho_tilde");
    }));

    results.push_back(check("sampler_determinism", [] {
        const auto seq = from_types({{10, 2, 3}, {10, 3, 2}});
        const auto a = sample_environment(seq, 42);
        const auto b = sample_environment(seq, 42);
        require(a.sigma == b.sigma, "same seed, different environment");
        const auto c2 = sample_environment(seq, 43);
        require(a.sigma != c2.sigma, "distinct seeds, same environment");
        build_digraph(seq, a); // validates the permutation
    }));

    results.push_back(check("transition_row_structure", [] {
        const auto seq = from_types({{10, 2, 4}, {10, 4, 2}, {20, 3, 3}});
        const auto g = build_digraph(seq, sample_environment(seq, 7));
        const auto p = build_P(g);
        for (int u = 0; u < seq.n(); ++u) {
            require(std::abs(p.probs.row(u).sum() - 1.0) < 1e-12, "row sum");
            for (int v = 0; v < seq.n(); ++v) {
                const double scaled = p.probs(u, v) * seq.d_plus[u];
                require(std::abs(scaled - std::round(scaled)) < 1e-12,
                        "entry not a multiple of 1/d_plus");
            }
        }
    }));

    results.push_back(check("expectation_identity_m4", [] {
        const auto seq = regular(2, 2); // M = 4
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                require(expected_entry(seq, i, j) == Rational(seq.d_minus[j], 4),
                        "E[P(i,j)] != d_minus/M");
    }));

    results.push_back(check("spectrum_trivial_cases", [] {
        const int n = 6;
        const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
        const auto flat = compute_spectrum(j);
        require(std::abs(flat.eigenvalues[0].real() - 1.0) < 1e-10, "J/n lambda1");
        require(flat.lambda2_mod < 1e-10, "J/n lambda2");
        Eigen::MatrixXd cyc = Eigen::MatrixXd::Zero(5, 5);
        for (int i = 0; i < 5; ++i) cyc(i, (i + 1) % 5) = 1.0;
        const auto ring = compute_spectrum(cyc);
        for (const auto& z : ring.eigenvalues)
            require(std::abs(std::abs(z) - 1.0) < 1e-10, "cycle spectrum off the circle");
    }));

    results.push_back(check("path_count_identity", [] {
        const auto seq = from_types({{2, 2, 3}, {2, 3, 2}});
        const auto g = build_digraph(seq, sample_environment(seq, 3));
        for (int i = 0; i < seq.n(); ++i)
            for (int j = 0; j < seq.n(); ++j) {
                int count = 0;
                enumerate_paths(g, i, j, 1, false, [&](const Path&) { ++count; });
                require(count == seq.d_plus[i] * seq.d_minus[j], "|P^1(i,j)| formula");
            }
    }));

    results.push_back(check("single_vertex_exact_matrices", [] {
        DegreeSequence seq = regular(1, 2); // M = 2, one vertex
        const auto g = build_digraph(seq, sample_environment(seq, 5));
        const auto pbar2 = variant_matrix(g, VariantTag::centered_tangle_free, 2);
        require(std::abs(pbar2(0, 0) - 0.25) < 1e-12, "Pbar^((2)) != 1/4");
        const auto ptf2 = variant_matrix(g, VariantTag::tangle_free, 2);
        require(std::abs(ptf2(0, 0) - 0.5) < 1e-12, "P^((2)) != 1/2");
        const auto r21 = variant_matrix(g, VariantTag::tangled_rest, 2, 1);
        require(std::abs(r21(0, 0)) < 1e-12, "R^{2,1} != 0");
        const auto r22 = variant_matrix(g, VariantTag::tangled_rest, 2, 2);
        require(std::abs(r22(0, 0) - 1.5) < 1e-12, "R^{2,2} != 3/2");
    }));

    results.push_back(check("decomposition_residual_small", [] {
        const auto seq = regular(40, 2);
        for (long long k = 0; k < 100000; ++k) {
            const std::uint64_t seed = derive_seed(1, k);
            const auto g = build_digraph(seq, sample_environment(seq, seed));
            if (!is_d_tangle_free(g, 2).tangle_free) continue;
            require(decomposition_residual(g, 2) <= 1e-9, "residual above 1e-9");
            return;
        }
        throw Error("no 2-tangle-free sample in the scan budget");
    }));

    results.push_back(check("telescoping_identity", [] {
        Rng rng(99);
        const int t = 5;
        std::vector<double> x(t), y(t);
        for (int s = 0; s < t; ++s) {
            x[s] = rng.unit() * 2.0 - 1.0;
            y[s] = rng.unit() * 2.0 - 1.0;
        }
        double prod_x = 1.0, prod_y = 1.0;
        for (int s = 0; s < t; ++s) {
            prod_x *= x[s];
            prod_y *= y[s];
        }
        double sum = 0.0;
        for (int l = 0; l < t; ++l) {
            double term = x[l] - y[l];
            for (int s = 0; s < l; ++s) term *= y[s];
            for (int s = l + 1; s < t; ++s) term *= x[s];
            sum += term;
        }
        require(std::abs(prod_y - (prod_x - sum)) < 1e-12, "telescoping identity");
    }));

    results.push_back(check("sylvester_identity", [] {
        Rng rng(123);
        const int n = 8;
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x(i) = rng.unit() * 2.0 - 1.0;
            y(i) = rng.unit() * 2.0 - 1.0;
        }
        const double mu = x.dot(y);
        const double z = 1.7;
        const Eigen::MatrixXd m =
            z * Eigen::MatrixXd::Identity(n, n) - x * y.transpose();
        const double det = m.partialPivLu().determinant();
        const double expected = std::pow(z, n - 1) * (z - mu);
        require(std::abs(det - expected) < 1e-8 * std::max(1.0, std::abs(expected)),
                "det(zI - xy^T) != z^{n-1}(z - <x,y>)");
    }));

    results.push_back(check("stationary_contract", [] {
        Rng rng(77);
        const int n = 12;
        Eigen::MatrixXd p(n, n);
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                p(i, j) = rng.unit() + 0.05;
                sum += p(i, j);
            }
            p.row(i) /= sum;
        }
        const Eigen::VectorXd pi = stationary(p);
        require((p.transpose() * pi - pi).lpNorm<1>() <= 1e-12, "residual contract");
        Eigen::MatrixXd swap(2, 2);
        swap << 0, 1, 1, 0;
        const Eigen::VectorXd pi2 = stationary(swap);
        require(std::abs(pi2(0) - 0.5) < 1e-12, "period-2 stationary");
        bool threw = false;
        try {
            rate_estimate(swap, 10);
        } catch (const Periodic&) {
            threw = true;
        }
        require(threw, "rate_estimate accepted a periodic chain");
    }));

    results.push_back(check("oracle_f_values", [] {
        const auto seq = regular(1, 2); // M = 2, d_plus = 2
        const HalfEdge e{0, 0, HalfEdgeKind::head}, f{0, 1, HalfEdgeKind::tail};
        const auto single = make_proto_path(seq, {{e, f}}, 0);
        require(F_value(seq, single) == Rational(1, 4), "F(N=1,p=0) != 1/(M d+)");
        const auto doubled = make_proto_path(seq, {{e, f}, {e, f}}, 2);
        // omega (M-1) / M^2 = (1/4)(1/4)
        require(F_value(seq, doubled) == Rational(1, 16), "F(N=2,p=2) != 1/16");
    }));

    results.push_back(check("tangle_counts", [] {
        require(count_independent_cycles(Multigraph{1, {{0, 0}, {0, 0}}}) == 2,
                "two loops");
        require(count_independent_cycles(Multigraph{2, {{0, 1}, {0, 1}, {1, 0}}}) == 2,
                "theta graph");
        require(count_independent_cycles(Multigraph{3, {{0, 1}, {1, 2}, {2, 0}}}) == 1,
                "triangle");
        require(count_independent_cycles(Multigraph{3, {{0, 1}, {1, 2}}}) == 0, "tree");
        require(is_tangle_free(Multigraph{1, {{0, 0}}}), "single loop is tangle-free");
    }));

    results.push_back(check("serialization_roundtrips", [] {
        const auto seq = from_types({{3, 2, 4}, {3, 4, 2}, {1, 2, 2}});
        require(parse_degrees(serialize_degrees(seq)).d_plus == seq.d_plus &&
                    parse_degrees(serialize_degrees(seq)).d_minus == seq.d_minus,
                "degree text roundtrip");
        const auto env = sample_environment(seq, 11);
        const auto back = parse_environment(serialize_environment(env));
        require(back.sigma == env.sigma && back.seed == env.seed,
                "environment roundtrip");
        Eigen::MatrixXd m(2, 2);
        m << 1.0 / 3.0, 0.1, -2.5e-17, 7.0;
        require(matrix_from_csv(matrix_to_csv(m)) == m, "matrix csv roundtrip");
    }));

    return results;
}

} // namespace dgs
