#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dgs/config_sampler.hpp"
#include "dgs/degree_model.hpp"
#include "dgs/errors.hpp"
#include "dgs/perturbation.hpp"
#include "dgs/rng.hpp"
#include "dgs/spectrum.hpp"
#include "dgs/transition.hpp"

using namespace dgs;

namespace {

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    std::vector<std::complex<double>> out(m.rows());
    for (int k = 0; k < m.rows(); ++k) out[k] = solver.eigenvalues()[k];
    return out;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int n, double scale) {
    std::uniform_real_distribution<double> uni(-scale, scale);
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = uni(gen);
    return m;
}

Eigen::VectorXd random_vector(std::mt19937_64& gen, int n, double scale) {
    std::uniform_real_distribution<double> uni(-scale, scale);
    Eigen::VectorXd v(n);
    for (int r = 0; r < n; ++r) v(r) = uni(gen);
    return v;
}

} // namespace

TEST_CASE("bauer-fike radius contains every perturbed eigenvalue") {
    std::mt19937_64 gen(20240816);
    std::uniform_int_distribution<int> dim(2, 7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = dim(gen);
        // Diagonalizable by construction: A = V D V^{-1}.
        Eigen::MatrixXd v;
        do {
            v = random_matrix(gen, n, 1.0);
        } while (std::abs(v.determinant()) < 1e-3);
        Eigen::VectorXd d = random_vector(gen, n, 2.0);
        const Eigen::MatrixXd a = v * d.asDiagonal() * v.inverse();
        const Eigen::MatrixXd h = random_matrix(gen, n, 0.05);

        const double radius = bauer_fike_radius(v, h);
        CHECK(radius >= 0.0);
        for (const auto& z : eigenvalues_of(a + h)) {
            double best = 1e300;
            for (int k = 0; k < n; ++k)
                best = std::min(best, std::abs(z - std::complex<double>(d(k), 0.0)));
            CHECK(best <= radius + 1e-8);
        }
    }
}

TEST_CASE("bauer-fike rejects a rank-deficient eigenbasis") {
    Eigen::MatrixXd v(3, 3);
    v << 1, 2, 3, 2, 4, 6, 0, 1, 1; // first two columns parallel... rows, actually rank 2
    CHECK_THROWS_AS(bauer_fike_radius(v, Eigen::MatrixXd::Zero(3, 3)), Singular);
    CHECK_THROWS_AS(bauer_fike_radius(Eigen::MatrixXd::Zero(2, 2),
                                      Eigen::MatrixXd::Zero(2, 2)),
                    Singular);
}

TEST_CASE("bauer-fike radius: exact value for an orthogonal eigenbasis") {
    // With an orthogonal eigenbasis kappa = 1, so the radius is ||H||.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 1) = 0.25;
    CHECK(bauer_fike_radius(Eigen::MatrixXd::Identity(3, 3), h) ==
          doctest::Approx(0.25).epsilon(1e-12));

    // Scaling the basis columns does not change kappa for a scalar multiple.
    CHECK(bauer_fike_radius(2.0 * Eigen::MatrixXd::Identity(3, 3), h) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("rank-one condition bound: formula and degeneracy guard") {
    Eigen::VectorXd x(3), y(3);
    x << 1.0, 2.0, -2.0;
    y << 0.5, -1.0, 1.5;
    const double mu = x.dot(y);
    const double want = 2.0 * x.squaredNorm() * y.squaredNorm() / (mu * mu);
    CHECK(rank1_condition_bound(x, y) == doctest::Approx(want).epsilon(1e-13));

    Eigen::VectorXd e1(2), e2(2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    CHECK_THROWS_AS(rank1_condition_bound(e1, e2), DegenerateInnerProduct);
}

TEST_CASE("sylvester: spectrum of x y^T is {0,...,0, <x,y>}") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> dim(2, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = dim(gen);
        const Eigen::VectorXd x = random_vector(gen, n, 3.0);
        const Eigen::VectorXd y = random_vector(gen, n, 3.0);
        const double mu = x.dot(y);
        auto eigs = eigenvalues_of(x * y.transpose());
        std::sort(eigs.begin(), eigs.end(),
                  [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
        for (int k = 0; k + 1 < n; ++k) CHECK(std::abs(eigs[k]) <= 1e-8 * std::abs(mu) + 1e-10);
        CHECK(std::abs(eigs.back() - std::complex<double>(mu, 0.0)) <=
              1e-9 * std::max(1.0, std::abs(mu)));
    }
}

TEST_CASE("rank-one localization: containment and the (n-1,1) split") {
    std::mt19937_64 gen(987654321);
    std::uniform_int_distribution<int> dim(3, 8);
    int separated_seen = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = dim(gen);
        Eigen::VectorXd x = random_vector(gen, n, 1.5);
        Eigen::VectorXd y = random_vector(gen, n, 1.5);
        if (std::abs(x.dot(y)) < 0.3) {
            x(0) += 1.0;
            y(0) += 1.0; // keep away from the degenerate guard
        }
        const Eigen::MatrixXd h = random_matrix(gen, n, 0.01);
        const LocalizationReport report = localize_rank1_perturbation(x, y, h);

        CHECK(report.mu == doctest::Approx(x.dot(y)).epsilon(1e-13));
        const double eps_want = 2.0 * x.squaredNorm() * y.squaredNorm() /
                                (report.mu * report.mu) *
                                h.jacobiSvd().singularValues()(0);
        CHECK(report.epsilon == doctest::Approx(eps_want).epsilon(1e-10));
        CHECK(report.containment_ok);
        CHECK(static_cast<int>(report.eigenvalues.size()) == n);
        CHECK(report.near_zero + report.near_mu == n);
        if (report.separated) {
            ++separated_seen;
            CHECK(2.0 * report.epsilon < std::abs(report.mu));
            CHECK(report.near_zero == n - 1);
            CHECK(report.near_mu == 1);
        }
    }
    // The small-H regime should separate most of the time.
    CHECK(separated_seen >= 60);
}

TEST_CASE("localization rejects orthogonal factors") {
    Eigen::VectorXd e1(3), e2(3);
    e1 << 1.0, 0.0, 0.0;
    e2 << 0.0, 1.0, 0.0;
    CHECK_THROWS_AS(localize_rank1_perturbation(e1, e2, Eigen::MatrixXd::Zero(3, 3)),
                    DegenerateInnerProduct);
}

TEST_CASE("unperturbed rank-one: report is exact") {
    Eigen::VectorXd x(4), y(4);
    x << 1.0, 1.0, 1.0, 1.0;
    y << 0.25, 0.25, 0.25, 0.25;
    const LocalizationReport report =
        localize_rank1_perturbation(x, y, Eigen::MatrixXd::Zero(4, 4));
    CHECK(report.mu == doctest::Approx(1.0));
    CHECK(report.epsilon == doctest::Approx(0.0));
    CHECK(report.separated);
    CHECK(report.containment_ok);
    CHECK(report.near_zero == 3);
    CHECK(report.near_mu == 1);
}

TEST_CASE("lambda2 certificate on a sampled regular graph") {
    const DegreeSequence seq = regular(50, 3);
    const Digraph g = build_digraph(seq, sample_environment(seq, 4));
    const SpectrumReport spec = compute_spectrum(build_P(g));

    for (int t : {2, 4}) {
        const Lambda2Certificate cert = certify_lambda2(g, t);
        CHECK(cert.t == t);
        CHECK(cert.q_norm >= 0.0);
        CHECK(cert.y_norm_sq > 0.0);
        CHECK(cert.epsilon == doctest::Approx(2.0 * g.n() * cert.y_norm_sq *
                                              cert.q_norm)
                                  .epsilon(1e-10));
        CHECK(cert.lambda2_pow_t ==
              doctest::Approx(std::pow(spec.lambda2_mod, t)).epsilon(1e-6));
        CHECK(cert.containment_ok);
        if (cert.separated) {
            // The certificate is the whole point: |lambda2|^t <= epsilon.
            CHECK(cert.certified);
            CHECK(cert.lambda2_pow_t <= cert.epsilon + 1e-8);
        }
    }
}

TEST_CASE("lambda2 certificate separates for regular graphs at moderate t") {
    // For a 3-regular digraph y is exactly uniform, mu = 1, and ||Q||
    // decays like |lambda2|^t, so separation kicks in quickly.
    const DegreeSequence seq = regular(60, 3);
    int separated = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Digraph g = build_digraph(seq, sample_environment(seq, seed));
        const Lambda2Certificate cert = certify_lambda2(g, 8);
        if (cert.separated) {
            ++separated;
            CHECK(cert.certified);
        }
    }
    CHECK(separated >= 4);
}
