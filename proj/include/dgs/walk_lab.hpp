#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dgs {

// Strong connectivity / period of the support digraph {(u,v) : P(u,v) > 0}.
bool is_irreducible(const Eigen::MatrixXd& p);
int chain_period(const Eigen::MatrixXd& p); // requires irreducible (Reducible)

// Unique stationary distribution of an irreducible row-stochastic matrix.
// Power iteration with Cesaro averaging first, dense linear solve as the
// fallback; the result always satisfies ||pi^T P - pi^T||_1 <= 1e-12
// (ConvergenceFailure otherwise). Throws Reducible when the support is not
// strongly connected.
Eigen::VectorXd stationary(const Eigen::MatrixXd& p);

// d(k) = max_x ||P^k(x,.) - pi||_TV with TV = half L1. Computed through
// the difference recursion D_{k+1} = P D_k, D_1 = P - 1 pi^T, which stays
// relatively accurate long after P^k itself has converged to 1 pi^T in
// double precision.
double distance_to_equilibrium(const Eigen::MatrixXd& p, int k);

struct MixingTrace {
    std::vector<double> d;     // d(1) .. d(k_max)
    std::vector<double> roots; // d(k)^{1/k}
    Eigen::VectorXd pi_star;
    bool aperiodic = false;
    bool degenerate_zero = false; // d(k_max) == 0 exactly (e.g. P = 1 pi^T)
};

MixingTrace mixing_trace(const Eigen::MatrixXd& p, int k_max);

// d(k_max)^{1/k_max}, which converges to |lambda_2| for irreducible
// aperiodic chains. Throws Reducible / Periodic when the hypotheses fail;
// degenerate exact-zero distances report rate 0 with the flag set.
struct RateEstimate {
    double rate = 0.0;
    bool degenerate_zero = false;
    std::vector<double> trailing_roots; // last few d(k)^{1/k}
};

RateEstimate rate_estimate(const Eigen::MatrixXd& p, int k_max);

// sum_j (pi_0^T P^t)_j^2 for the uniform start pi_0: the probability two
// independent walks coincide at time t.
double collision_probability(const Eigen::MatrixXd& p, int t);

// CSV rows `k,d,root`.
std::string mixing_trace_to_csv(const MixingTrace& trace);

} // namespace dgs
