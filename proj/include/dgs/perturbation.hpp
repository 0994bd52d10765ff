#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dgs/config_sampler.hpp"

namespace dgs {

// Bauer-Fike radius for A = P_diag D P_diag^{-1} + H: every eigenvalue of
// the perturbed matrix is within kappa(P_diag) * ||H|| of an eigenvalue of
// the unperturbed one. Operator 2-norms; throws Singular when P_diag is
// numerically rank-deficient.
double bauer_fike_radius(const Eigen::MatrixXd& p_diag, const Eigen::MatrixXd& h);

// Condition bound for the eigenbasis of the rank-one matrix x y^T:
// kappa <= 2 ||x||^2 ||y||^2 / <x,y>^2. Throws DegenerateInnerProduct when
// <x,y> is negligible against ||x|| ||y||.
double rank1_condition_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Spectrum localization for x y^T + H: eigenvalues live in
// B(0, eps) union B(mu, eps) with mu = <x,y> and
// eps = 2 ||x||^2 ||y||^2 mu^{-2} ||H||. When the balls are disjoint
// (2 eps < |mu|) the split is (n-1, 1).
struct LocalizationReport {
    double mu = 0.0;
    double epsilon = 0.0;
    bool separated = false;      // 2 eps < |mu|
    bool containment_ok = false; // every eigenvalue inside the union
    int near_zero = 0;           // eigenvalues in B(0, eps) (nearest ball)
    int near_mu = 0;
    std::vector<std::complex<double>> eigenvalues;
};

LocalizationReport localize_rank1_perturbation(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& y,
                                               const Eigen::MatrixXd& h,
                                               double slack = 1e-8);

// The second-eigenvalue certificate: apply the localization to
// P^t = x y^T + Q with x = 1, y = (P^t)^T 1 / n (so mu = 1); when
// separation holds, |lambda_2(P)|^t <= epsilon.
struct Lambda2Certificate {
    int t = 0;
    double q_norm = 0.0;        // ||P^t - x y^T||
    double y_norm_sq = 0.0;     // the collision probability
    double epsilon = 0.0;       // 2 n ||y||^2 ||Q||
    double lambda2_pow_t = 0.0; // second modulus of spec(P^t)
    bool separated = false;
    bool containment_ok = false;
    bool certified = false;     // separated && |lambda2|^t <= epsilon + slack
};

Lambda2Certificate certify_lambda2(const Digraph& g, int t, double slack = 1e-8);

} // namespace dgs
