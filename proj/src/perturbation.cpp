#include "dgs/perturbation.hpp"

#include <cmath>

#include "dgs/errors.hpp"
#include "dgs/spectrum.hpp"
#include "dgs/transition.hpp"

namespace dgs {

double bauer_fike_radius(const Eigen::MatrixXd& p_diag, const Eigen::MatrixXd& h) {
    if (p_diag.rows() != p_diag.cols())
        throw SizeMismatch("diagonalizing matrix must be square");
    if (h.rows() != p_diag.rows() || h.cols() != p_diag.cols())
        throw SizeMismatch("perturbation has a different shape than the base matrix");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(p_diag);
    if (svd.info() != Eigen::Success)
        throw ConvergenceFailure("SVD failed in bauer_fike_radius");
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    if (smin <= smax * 1e-14)
        throw Singular("diagonalizing matrix is numerically singular");
    Eigen::BDCSVD<Eigen::MatrixXd> svd_h(h);
    if (svd_h.info() != Eigen::Success)
        throw ConvergenceFailure("SVD failed in bauer_fike_radius");
    return (smax / smin) * svd_h.singularValues()(0);
}

double rank1_condition_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw SizeMismatch("x and y have different lengths");
    const double mu = x.dot(y);
    if (std::abs(mu) < 1e-12 * x.norm() * y.norm())
        throw DegenerateInnerProduct("<x,y> is negligible: the rank-one matrix has "
                                     "no spectral gap to certify");
    return 2.0 * x.squaredNorm() * y.squaredNorm() / (mu * mu);
}

LocalizationReport localize_rank1_perturbation(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& y,
                                               const Eigen::MatrixXd& h,
                                               double slack) {
    if (h.rows() != x.size() || h.cols() != y.size())
        throw SizeMismatch("perturbation shape does not match the outer product");
    LocalizationReport report;
    report.mu = x.dot(y);
    const double kappa = rank1_condition_bound(x, y); // checks degeneracy

    Eigen::BDCSVD<Eigen::MatrixXd> svd_h(h);
    if (svd_h.info() != Eigen::Success)
        throw ConvergenceFailure("SVD failed on the perturbation");
    const double h_norm = h.size() == 0 ? 0.0 : svd_h.singularValues()(0);
    report.epsilon = kappa * h_norm;
    report.separated = 2.0 * report.epsilon < std::abs(report.mu);

    const Eigen::MatrixXd a = x * y.transpose() + h;
    const SpectrumReport spec = compute_spectrum(a);
    report.eigenvalues = spec.eigenvalues;

    report.containment_ok = true;
    for (const auto& z : report.eigenvalues) {
        const double d0 = std::abs(z);
        const double dmu = std::abs(z - std::complex<double>(report.mu, 0.0));
        if (d0 <= dmu)
            ++report.near_zero;
        else
            ++report.near_mu;
        if (std::min(d0, dmu) > report.epsilon + slack) report.containment_ok = false;
    }
    return report;
}

Lambda2Certificate certify_lambda2(const Digraph& g, int t, double slack) {
    if (t < 1) throw SizeMismatch("certificate power t must be >= 1");
    const int n = g.n();
    const Eigen::MatrixXd p = build_P(g).probs;
    Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < t; ++s) pt = pt * p;

    const Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd y = pt.transpose() * x / static_cast<double>(n);
    const Eigen::MatrixXd q = pt - x * y.transpose();

    Lambda2Certificate cert;
    cert.t = t;
    cert.y_norm_sq = y.squaredNorm();

    Eigen::BDCSVD<Eigen::MatrixXd> svd_q(q);
    if (svd_q.info() != Eigen::Success)
        throw ConvergenceFailure("SVD failed on the rank-one remainder");
    cert.q_norm = svd_q.singularValues()(0);
    // mu = <1, y> = 1 for a stochastic P, so the radius is 2 n ||y||^2 ||Q||.
    cert.epsilon = 2.0 * static_cast<double>(n) * cert.y_norm_sq * cert.q_norm;

    const SpectrumReport spec = compute_spectrum(pt);
    cert.lambda2_pow_t = spec.lambda2_mod;
    cert.separated = 2.0 * cert.epsilon < 1.0;
    cert.containment_ok = true;
    for (const auto& z : spec.eigenvalues) {
        const double d0 = std::abs(z);
        const double d1 = std::abs(z - std::complex<double>(1.0, 0.0));
        if (std::min(d0, d1) > cert.epsilon + slack) cert.containment_ok = false;
    }
    cert.certified =
        cert.separated && cert.lambda2_pow_t <= cert.epsilon + slack;
    return cert;
}

} // namespace dgs
