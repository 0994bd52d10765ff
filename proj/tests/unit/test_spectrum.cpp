#include <doctest.h>

#include <cmath>
#include <complex>

#include "dgs/config_sampler.hpp"
#include "dgs/errors.hpp"
#include "dgs/spectrum.hpp"

using namespace dgs;

namespace {
Eigen::MatrixXd cycle_matrix(int n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, (i + 1) % n) = 1.0;
    return p;
}
} // namespace

TEST_CASE("rank-one projector spectrum: 1 and zeros") {
    const int n = 7;
    const auto report = compute_spectrum(Eigen::MatrixXd::Constant(n, n, 1.0 / n));
    REQUIRE(static_cast<int>(report.eigenvalues.size()) == n);
    CHECK(report.eigenvalues[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(report.eigenvalues[0].imag()) <= 1e-12);
    CHECK(report.lambda2_mod <= 1e-12);
}

TEST_CASE("directed cycle spectrum is the roots of unity") {
    const int n = 6;
    const auto report = compute_spectrum(cycle_matrix(n));
    for (const auto& z : report.eigenvalues)
        CHECK(std::abs(std::abs(z) - 1.0) <= 1e-12);
    CHECK(report.lambda2_mod == doctest::Approx(1.0).epsilon(1e-12));
    // each n-th root of unity appears exactly once
    for (int k = 0; k < n; ++k) {
        const std::complex<double> target = std::polar(1.0, 2.0 * M_PI * k / n);
        int hits = 0;
        for (const auto& z : report.eigenvalues)
            if (std::abs(z - target) < 1e-9) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("circulant mixture has the predicted spectrum") {
    const int n = 8;
    const Eigen::MatrixXd c = cycle_matrix(n);
    const Eigen::MatrixXd p = 0.5 * c + 0.5 * (c * c);
    const auto report = compute_spectrum(p);
    // eigenvalues are (w + w^2)/2 over 8th roots of unity w
    std::vector<double> expected;
    for (int k = 0; k < n; ++k) {
        const std::complex<double> w = std::polar(1.0, 2.0 * M_PI * k / n);
        expected.push_back(std::abs(0.5 * (w + w * w)));
    }
    std::sort(expected.rbegin(), expected.rend());
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(report.eigenvalues[i]) ==
              doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("sort order: modulus desc, then real desc, then imag desc") {
    const auto report = compute_spectrum(cycle_matrix(4)); // 1, i, -i, -1
    REQUIRE(report.eigenvalues.size() == 4);
    CHECK(report.eigenvalues[0].real() == doctest::Approx(1.0));
    CHECK(report.eigenvalues[1].imag() == doctest::Approx(1.0));  // +i before -i
    CHECK(report.eigenvalues[2].imag() == doctest::Approx(-1.0));
    CHECK(report.eigenvalues[3].real() == doctest::Approx(-1.0));
}

TEST_CASE("bound verdicts compare against rho_tilde + epsilon") {
    const DegreeSequence seq = regular(30, 3);
    const Digraph g = build_digraph(seq, sample_environment(seq, 5));
    const auto report = compute_spectrum(build_P(g));
    CHECK(report.rho == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(report.rho_tilde == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

    const BoundVerdict loose = check_main_bound(report, 1.0);
    CHECK(loose.satisfied);
    CHECK(loose.threshold ==
          doctest::Approx(report.rho_tilde + 1.0).epsilon(1e-14));
    CHECK(loose.margin ==
          doctest::Approx(loose.threshold - report.lambda2_mod).epsilon(1e-14));

    const BoundVerdict tight = check_main_bound(report, -report.rho_tilde);
    CHECK_FALSE(tight.satisfied); // threshold 0 < |lambda2|

    const auto headless = compute_spectrum(Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(check_main_bound(headless, 0.1), Error);
}

TEST_CASE("ramanujan predicate") {
    // directed cycle: all moduli 1 -> trivial eigenvalues only -> ramanujan
    SpectrumReport ring;
    ring.eigenvalues = {{1.0, 0.0}, {-1.0, 0.0}};
    ring.lambda2_mod = 1.0;
    CHECK(is_ramanujan_digraph(ring, 4));
    SpectrumReport mid;
    mid.eigenvalues = {{1.0, 0.0}, {0.9, 0.0}};
    mid.lambda2_mod = 0.9;
    CHECK_FALSE(is_ramanujan_digraph(mid, 4)); // 0.9 > 1/2 and < 1
    SpectrumReport good;
    good.eigenvalues = {{1.0, 0.0}, {0.4, 0.0}};
    good.lambda2_mod = 0.4;
    CHECK(is_ramanujan_digraph(good, 4)); // 0.4 <= 1/2
}

TEST_CASE("spectrum CSV shape and determinism") {
    const auto report = compute_spectrum(cycle_matrix(3));
    const std::string csv = spectrum_to_csv(report);
    CHECK(csv.rfind("re,im,modulus\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 rows
    CHECK(csv == spectrum_to_csv(report));
}

TEST_CASE("spectrum SVG carries the three reference circles") {
    const DegreeSequence seq = regular(12, 3);
    const Digraph g = build_digraph(seq, sample_environment(seq, 2));
    const auto report = compute_spectrum(build_P(g));
    const std::string svg = spectrum_to_svg(report, report.rho, 0.5);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("#cc2222") != std::string::npos);  // rho circle
    CHECK(svg.find("#22aa44") != std::string::npos);  // 1/delta circle
    CHECK(svg.find("#444444") != std::string::npos);  // unit circle
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 12);
    CHECK(svg == spectrum_to_svg(report, report.rho, 0.5));
}
