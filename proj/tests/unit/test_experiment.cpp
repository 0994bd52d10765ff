#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dgs/errors.hpp"
#include "dgs/experiment.hpp"

using namespace dgs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("dgs_test_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string base_json(const std::string& kind, const std::string& extra = "") {
    return "{\"schema_version\":1,\"kind\":\"" + kind +
           "\",\"degrees\":{\"regular\":{\"n\":16,\"d\":2}}" +
           (extra.empty() ? "" : "," + extra) + "}";
}

int run_to(const ExperimentConfig& cfg, const std::string& out, int jobs = 1) {
    RunOptions opt;
    opt.out_dir = out;
    opt.jobs = jobs;
    std::ostringstream log;
    return run_experiment(cfg, opt, log);
}

} // namespace

TEST_CASE("config parsing: happy path covers every field") {
    const std::string text = R"json({
        "schema_version": 1,
        "kind": "verify-bound",
        "degrees": {"types": [[3, 2, 4], [3, 4, 2], [1, 2, 2]]},
        "seed_root": 99,
        "trials": 7,
        "epsilon": 0.25,
        "t": 3,
        "alpha": 0.3,
        "c": 1.5,
        "D": [2, 4],
        "k_max": 12,
        "svg": true,
        "enum_cap": 500,
        "oracle_cap": 6,
        "residual_tol": 1e-7,
        "min_fraction": 0.5,
        "scan_limit": 1000,
        "proto_paths": ["p=0; (0,0,+)/(0,0,-)"],
        "out_dir": "somewhere"
    })json";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.kind == "verify-bound");
    CHECK(cfg.degrees_mode == ExperimentConfig::DegreesMode::types);
    REQUIRE(cfg.types.size() == 3);
    CHECK(cfg.types[0].count == 3);
    CHECK(cfg.types[2].d_minus == 2);
    CHECK(cfg.seed_root == 99);
    CHECK(cfg.trials == 7);
    CHECK(cfg.epsilon == 0.25);
    CHECK(cfg.t == 3);
    CHECK(cfg.alpha == 0.3);
    CHECK(cfg.c == 1.5);
    CHECK(cfg.D == std::vector<int>{2, 4});
    CHECK(cfg.k_max == 12);
    CHECK(cfg.svg);
    CHECK(cfg.enum_cap == 500);
    CHECK(cfg.oracle_cap == 6);
    CHECK(cfg.residual_tol == 1e-7);
    CHECK(cfg.min_fraction == 0.5);
    CHECK(cfg.scan_limit == 1000);
    REQUIRE(cfg.proto_paths.size() == 1);
    CHECK(cfg.out_dir == "somewhere");

    const ExperimentConfig reg = parse_config_text(base_json("spectrum"));
    CHECK(reg.degrees_mode == ExperimentConfig::DegreesMode::regular);
    CHECK(reg.regular_n == 16);
    CHECK(reg.regular_d == 2);
}

TEST_CASE("config parsing: rejections name the offender") {
    const auto thrown_message = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("NO THROW");
    };

    CHECK(thrown_message("{") != "NO THROW");
    CHECK(thrown_message("[]") != "NO THROW");

    // schema_version gate
    CHECK(thrown_message("{\"kind\":\"spectrum\",\"degrees\":{\"regular\":{\"n\":4,\"d\":2}}}")
              .find("schema_version") != std::string::npos);
    CHECK(thrown_message("{\"schema_version\":2,\"kind\":\"spectrum\","
                         "\"degrees\":{\"regular\":{\"n\":4,\"d\":2}}}")
              .find("schema_version") != std::string::npos);

    // unknown keys at all three levels
    CHECK(thrown_message(base_json("spectrum", "\"zzz\": 1")).find("zzz") !=
          std::string::npos);
    CHECK(thrown_message("{\"schema_version\":1,\"kind\":\"spectrum\","
                         "\"degrees\":{\"regular\":{\"n\":4,\"d\":2},\"bogus\":3}}")
              .find("bogus") != std::string::npos);
    CHECK(thrown_message("{\"schema_version\":1,\"kind\":\"spectrum\","
                         "\"degrees\":{\"regular\":{\"n\":4,\"d\":2,\"extra\":1}}}")
              .find("extra") != std::string::npos);

    // degrees: exactly one mode
    CHECK(thrown_message("{\"schema_version\":1,\"kind\":\"spectrum\",\"degrees\":{}}") !=
          "NO THROW");
    CHECK(thrown_message(
              "{\"schema_version\":1,\"kind\":\"spectrum\",\"degrees\":"
              "{\"regular\":{\"n\":4,\"d\":2},\"file\":\"x.txt\"}}") != "NO THROW");

    // bad enum / ranges / types
    CHECK(thrown_message(base_json("florble")).find("florble") != std::string::npos);
    CHECK(thrown_message(base_json("spectrum", "\"trials\": 0")) != "NO THROW");
    CHECK(thrown_message(base_json("spectrum", "\"trials\": \"three\"")) != "NO THROW");
    CHECK(thrown_message(base_json("spectrum", "\"t\": -1")) != "NO THROW");
    CHECK(thrown_message(base_json("spectrum", "\"k_max\": 0")) != "NO THROW");

    // n_sweep is a census-only feature, rejected elsewhere at run time
    const ExperimentConfig sweep =
        parse_config_text(base_json("spectrum", "\"n_sweep\": [16, 32]"));
    TempDir tmp("sweep_reject");
    std::ostringstream log;
    RunOptions opt;
    opt.out_dir = tmp.str();
    CHECK_THROWS_AS(run_experiment(sweep, opt, log), ConfigError);
}

TEST_CASE("missing config file is an io error with the path in the message") {
    try {
        load_config("/nonexistent/route/config.json");
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/route/config.json") !=
              std::string::npos);
    }
}

TEST_CASE("runs are deterministic: byte-identical artifacts") {
    const ExperimentConfig cfg =
        parse_config_text(base_json("spectrum", "\"trials\": 4, \"svg\": true"));
    TempDir a("det_a"), b("det_b");
    CHECK(run_to(cfg, a.str()) == 0);
    CHECK(run_to(cfg, b.str(), 2) == 0); // job count must not matter
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(a.path)) {
        const auto name = entry.path().filename();
        REQUIRE(fs::exists(b.path / name));
        CHECK(slurp(entry.path()) == slurp(b.path / name));
        ++compared;
    }
    CHECK(compared >= 2 + 2 * 4); // trials, summary, csv+svg per seed

    // Seed-root override changes the data.
    RunOptions opt;
    opt.out_dir = a.str();
    opt.seed_root = 2;
    opt.jobs = 1;
    std::ostringstream log;
    CHECK(run_experiment(cfg, opt, log) == 0);
    CHECK(slurp(a.path / "trials.csv") != slurp(b.path / "trials.csv"));
}

TEST_CASE("spectrum run: artifact inventory and row shape") {
    const ExperimentConfig cfg =
        parse_config_text(base_json("spectrum", "\"trials\": 2, \"svg\": true"));
    TempDir tmp("spectrum");
    REQUIRE(run_to(cfg, tmp.str()) == 0);

    const std::string trials = slurp(tmp.path / "trials.csv");
    std::istringstream in(trials);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "seed,n,m,rho,rho_tilde,lambda2,ramanujan");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
        // Per-seed artifacts are named by the derived seed in column one.
        const std::string seed = line.substr(0, line.find(','));
        CHECK(fs::exists(tmp.path / ("spectrum_seed" + seed + ".csv")));
        CHECK(fs::exists(tmp.path / ("spectrum_seed" + seed + ".svg")));
    }
    CHECK(rows == 2);
    CHECK(fs::exists(tmp.path / "summary.csv"));
}

TEST_CASE("verify-bound run: satisfied fraction drives the exit code") {
    // Loose epsilon: everything passes.
    const ExperimentConfig loose = parse_config_text(
        base_json("verify-bound", "\"trials\": 3, \"epsilon\": 2.0, \"min_fraction\": 1.0"));
    TempDir tmp("verify");
    CHECK(run_to(loose, tmp.str()) == 0);
    const std::string summary = slurp(tmp.path / "summary.csv");
    CHECK(summary.find("satisfied_fraction,1") != std::string::npos);

    // Impossible epsilon: nothing passes, exit code 1.
    const ExperimentConfig tight = parse_config_text(base_json(
        "verify-bound", "\"trials\": 3, \"epsilon\": -2.0, \"min_fraction\": 0.5"));
    TempDir tmp2("verify_tight");
    CHECK(run_to(tight, tmp2.str()) == 1);
    const std::string s2 = slurp(tmp2.path / "summary.csv");
    CHECK(s2.find("satisfied_fraction,0") != std::string::npos);

    // Report-only mode never fails the run.
    const ExperimentConfig report = parse_config_text(
        base_json("verify-bound", "\"trials\": 2, \"epsilon\": -2.0"));
    TempDir tmp3("verify_report");
    CHECK(run_to(report, tmp3.str()) == 0);
}

TEST_CASE("oracle run: exhaustive identity on a tiny fixture") {
    const std::string text = R"json({
        "schema_version": 1,
        "kind": "oracle",
        "degrees": {"regular": {"n": 2, "d": 2}},
        "proto_paths": ["p=0; (0,0,+)/(1,1,-)", "p=1; (0,0,+)/(1,1,-)"]
    })json";
    const ExperimentConfig cfg = parse_config_text(text);
    TempDir tmp("oracle");
    CHECK(run_to(cfg, tmp.str()) == 0);
    const std::string report = slurp(tmp.path / "oracle_report.csv");
    CHECK(report.find("check,i,j,expected,computed,match") == 0);
    CHECK(report.find("expected_entry,0,0,1/2,1/2,1") != std::string::npos);
    CHECK(report.find("proto_bound") != std::string::npos);
    const std::string summary = slurp(tmp.path / "summary.csv");
    CHECK(summary.find("expectation_identity,1") != std::string::npos);
    CHECK(summary.find("proto_bound_violations,0") != std::string::npos);
}

TEST_CASE("decomposition run: scan mode fills the quota and reports residuals") {
    const std::string text = R"json({
        "schema_version": 1,
        "kind": "decomposition",
        "degrees": {"regular": {"n": 12, "d": 2}},
        "trials": 2,
        "t": 1,
        "scan_limit": 500,
        "residual_tol": 1e-9
    })json";
    const ExperimentConfig cfg = parse_config_text(text);
    TempDir tmp("decomp");
    CHECK(run_to(cfg, tmp.str()) == 0);
    const std::string trials = slurp(tmp.path / "trials.csv");
    CHECK(trials.find("seed,n,m,t,tangle_free,residual,ok") == 0);
    std::istringstream in(trials);
    std::string line;
    std::getline(in, line);
    int ok_rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find(",1") != std::string::npos);
        ++ok_rows;
    }
    CHECK(ok_rows == 2);
}

TEST_CASE("mixing run: per-seed trace artifacts appear for irreducible chains") {
    const ExperimentConfig cfg = parse_config_text(
        base_json("mixing", "\"trials\": 2, \"k_max\": 20"));
    TempDir tmp("mixing");
    run_to(cfg, tmp.str()); // exit code depends on the draw; artifacts must not
    const std::string trials = slurp(tmp.path / "trials.csv");
    CHECK(trials.find("seed,") == 0);
    std::istringstream in(trials);
    std::string header, row;
    std::getline(in, header);
    int traces = 0;
    while (std::getline(in, row)) {
        const auto seed = row.substr(0, row.find(','));
        if (fs::exists(tmp.path / ("mixing_seed" + seed + ".csv"))) {
            ++traces;
            const std::string trace = slurp(tmp.path / ("mixing_seed" + seed + ".csv"));
            CHECK(trace.find("k,d,root") == 0);
        }
    }
    CHECK(fs::exists(tmp.path / "summary.csv"));
}

TEST_CASE("tangle census: n_sweep emits one fraction per size") {
    const std::string text = R"json({
        "schema_version": 1,
        "kind": "tangle-census",
        "degrees": {"regular": {"n": 16, "d": 2}},
        "n_sweep": [16, 32],
        "trials": 5,
        "t": 1
    })json";
    const ExperimentConfig cfg = parse_config_text(text);
    TempDir tmp("census");
    CHECK(run_to(cfg, tmp.str()) == 0);
    const std::string summary = slurp(tmp.path / "summary.csv");
    CHECK(summary.find("tangle_free_fraction_n16") != std::string::npos);
    CHECK(summary.find("tangle_free_fraction_n32") != std::string::npos);
    const std::string trials = slurp(tmp.path / "trials.csv");
    CHECK(trials.find("n,seed,t,tangle_free,witness") == 0);

    // Sweep sizes must scale the type counts integrally.
    const std::string bad = R"json({
        "schema_version": 1,
        "kind": "tangle-census",
        "degrees": {"types": [[3, 2, 2]]},
        "n_sweep": [4]
    })json";
    TempDir tmp2("census_bad");
    std::ostringstream log;
    RunOptions opt;
    opt.out_dir = tmp2.str();
    CHECK_THROWS_AS(run_experiment(parse_config_text(bad), opt, log), ConfigError);
}

TEST_CASE("norm-report run: rows for the cut matrix and every rest term") {
    const ExperimentConfig cfg = parse_config_text(
        base_json("norm-report", "\"trials\": 1, \"t\": 2, \"D\": [2, 3]"));
    TempDir tmp("norms");
    CHECK(run_to(cfg, tmp.str()) == 0);
    const std::string trials = slurp(tmp.path / "trials.csv");
    CHECK(trials.find("seed,n,t,object,ell,norm,root,bound_D2,bound_D3") == 0);
    CHECK(trials.find("centered_cut,0,") != std::string::npos);
    CHECK(trials.find("rest,1,") != std::string::npos);
    CHECK(trials.find("rest,2,") != std::string::npos);
}

TEST_CASE("oracle file entry point") {
    TempDir tmp("oracle_file");
    const fs::path spec_file = tmp.path / "paths.txt";
    {
        std::ofstream out(spec_file);
        out << "# tiny fixture\n";
        out << "degrees:\n";
        out << "2 2 2\n";
        out << "paths:\n";
        out << "p=0; (0,0,+)/(1,1,-)\n";
        out << "p=2; (0,0,+)/(1,1,-) (0,0,+)/(1,1,-)\n";
    }
    std::ostringstream log;
    const int rc = run_oracle_file(spec_file.string(), (tmp.path / "out").string(),
                                   2.0, log);
    CHECK(rc == 0);
    const std::string report = slurp(tmp.path / "out" / "oracle_report.csv");
    CHECK(report.find("index,length,split,a,b,a1,simple,omega,F,F_double,c,rhs,"
                      "in_regime,satisfied,literal") == 0);
    CHECK(report.find("\"p=0; (0,0,+)/(1,1,-)\"") != std::string::npos);

    CHECK_THROWS_AS(run_oracle_file("/missing/file.txt", tmp.str(), 2.0, log),
                    IoError);
}

TEST_CASE("self checks all pass") {
    const std::vector<CheckResult> checks = run_self_checks();
    CHECK(checks.size() >= 10);
    for (const CheckResult& c : checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
}
