#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dgs/degree_model.hpp"
#include "dgs/errors.hpp"

using namespace dgs;

TEST_CASE("validate accepts balanced sequences and fills the cached fields") {
    DegreeSequence seq = from_types({{2, 2, 3}, {2, 3, 2}});
    CHECK(seq.n() == 4);
    CHECK(seq.total == 10);
    CHECK(seq.min_degree == 2);
    CHECK(seq.max_degree == 3);
}

TEST_CASE("validate rejects malformed sequences") {
    CHECK_THROWS_AS(from_types({}), EmptySequence);
    CHECK_THROWS_AS(from_types({{2, 2, 3}}), UnbalancedSums); // 4 heads, 6 tails
    CHECK_THROWS_AS(from_types({{2, 1, 1}}), DegreeTooSmall);
    CHECK_THROWS_AS(from_types({{1, 0, 0}}), DegreeTooSmall);
    CHECK_THROWS_AS(validate({2, 2}, {2}), SizeMismatch);
}

TEST_CASE("regular sequences") {
    const DegreeSequence seq = regular(7, 3);
    CHECK(seq.n() == 7);
    CHECK(seq.total == 21);
    for (int v = 0; v < 7; ++v) {
        CHECK(seq.d_plus[v] == 3);
        CHECK(seq.d_minus[v] == 3);
    }
    CHECK_THROWS_AS(regular(0, 3), EmptySequence);
    CHECK_THROWS_AS(regular(5, 1), DegreeTooSmall);
}

TEST_CASE("rho closed forms") {
    // regular: rho = 1/sqrt(d)
    CHECK(rho(regular(10, 4)) == doctest::Approx(0.5).epsilon(1e-14));
    // half (2,2) and half (8,8): rho^2 = (1/M) sum d-/d+ = n(1+1)/ (n(2+8)/... )
    const DegreeSequence mixed = from_types({{100, 2, 2}, {100, 8, 8}});
    CHECK(rho(mixed) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
    // figure mix at n=180: M = 60(5+3+9) = 1020, sum d-/d+ = 60(6/5+7/3+4/9)
    const DegreeSequence fig = from_types({{60, 5, 6}, {60, 3, 7}, {60, 9, 4}});
    CHECK(rho(fig) == doctest::Approx(std::sqrt(179.0 / 765.0)).epsilon(1e-14));
    CHECK(rho(fig) == doctest::Approx(0.48372).epsilon(1e-4));
}

TEST_CASE("rho_tilde takes the max with 1/delta") {
    const DegreeSequence skew = from_types({{700, 2, 2}, {800, 9, 9}});
    // rho ~ sqrt((700/2 + 800/9)/8600) ~ 0.226 < 1/2
    CHECK(rho(skew) < 0.5);
    CHECK(rho_tilde(skew) == doctest::Approx(0.5).epsilon(1e-14));
    const DegreeSequence reg = regular(10, 9);
    CHECK(rho_tilde(reg) == doctest::Approx(rho(reg)).epsilon(1e-14));
}

TEST_CASE("degree text format") {
    const char* text =
        "# out-degree / in-degree profile\n"
        "3 2 4\n"
        "\n"
        "3 4 2   # trailing comment\n"
        "1 2 2\n";
    const DegreeSequence seq = parse_degrees(text);
    CHECK(seq.n() == 7);
    CHECK(seq.d_plus[0] == 2);
    CHECK(seq.d_minus[0] == 4);
    CHECK(seq.d_plus[3] == 4);
    CHECK(seq.total == 20);

    const std::string out = serialize_degrees(seq);
    const DegreeSequence back = parse_degrees(out);
    CHECK(back.d_plus == seq.d_plus);
    CHECK(back.d_minus == seq.d_minus);
}

TEST_CASE("degree text errors carry line numbers") {
    try {
        parse_degrees("2 2 2\nnot a row\n");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_degrees(""), EmptySequence);
    CHECK_THROWS_AS(parse_degrees("1 2\n"), IoError);
    CHECK_THROWS_AS(parse_degrees("-1 2 2\n"), IoError);
    CHECK_THROWS_AS(parse_degrees("2 2 3\n"), UnbalancedSums);
}

TEST_CASE("degree file round trip") {
    const DegreeSequence seq = from_types({{5, 2, 3}, {5, 3, 2}});
    const std::string path =
        (std::filesystem::temp_directory_path() / "dgs_degrees_test.txt").string();
    save_degrees(seq, path);
    const DegreeSequence back = load_degrees(path);
    CHECK(back.d_plus == seq.d_plus);
    CHECK(back.d_minus == seq.d_minus);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_degrees(path), IoError);
}
