#include "dgs/walk_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dgs/errors.hpp"
#include "dgs/format.hpp"

namespace dgs {

namespace {

void check_stochastic(const Eigen::MatrixXd& p) {
    if (p.rows() != p.cols()) throw SizeMismatch("transition matrix must be square");
    if (p.rows() == 0) throw SizeMismatch("transition matrix is empty");
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        if (p.row(i).minCoeff() < 0.0)
            throw SizeMismatch("transition matrix has a negative entry in row " +
                               std::to_string(i));
        if (std::abs(p.row(i).sum() - 1.0) > 1e-9)
            throw SizeMismatch("row " + std::to_string(i) + " does not sum to 1");
    }
}

std::vector<std::vector<int>> support_adjacency(const Eigen::MatrixXd& p,
                                                bool transpose) {
    const int n = static_cast<int>(p.rows());
    std::vector<std::vector<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (p(u, v) > 0.0) adj[transpose ? v : u].push_back(transpose ? u : v);
    return adj;
}

std::vector<int> reachable(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<int> seen(adj.size(), 0), order;
    seen[start] = 1;
    order.push_back(start);
    for (size_t qi = 0; qi < order.size(); ++qi)
        for (int v : adj[order[qi]])
            if (!seen[v]) {
                seen[v] = 1;
                order.push_back(v);
            }
    return seen;
}

} // namespace

bool is_irreducible(const Eigen::MatrixXd& p) {
    check_stochastic(p);
    const auto fwd = reachable(support_adjacency(p, false), 0);
    const auto bwd = reachable(support_adjacency(p, true), 0);
    for (size_t v = 0; v < fwd.size(); ++v)
        if (!fwd[v] || !bwd[v]) return false;
    return true;
}

int chain_period(const Eigen::MatrixXd& p) {
    if (!is_irreducible(p)) throw Reducible("chain_period needs an irreducible chain");
    const int n = static_cast<int>(p.rows());
    // BFS levels from vertex 0; the period is the gcd of level[u]+1-level[v]
    // over support edges u->v.
    const auto adj = support_adjacency(p, false);
    std::vector<int> level(n, -1), order;
    level[0] = 0;
    order.push_back(0);
    for (size_t qi = 0; qi < order.size(); ++qi)
        for (int v : adj[order[qi]])
            if (level[v] < 0) {
                level[v] = level[order[qi]] + 1;
                order.push_back(v);
            }
    long long g = 0;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) g = std::gcd(g, static_cast<long long>(level[u] + 1 - level[v]));
    return static_cast<int>(g);
}

Eigen::VectorXd stationary(const Eigen::MatrixXd& p) {
    check_stochastic(p);
    if (!is_irreducible(p))
        throw Reducible("stationary distribution needs an irreducible chain");
    const int n = static_cast<int>(p.rows());
    const double target = 5e-13;

    auto residual = [&](const Eigen::VectorXd& pi) {
        return (p.transpose() * pi - pi).lpNorm<1>();
    };

    // Power iteration on P^T with a Cesaro average alongside; the average
    // rescues slowly-mixing and periodic-ish chains where the raw iterate
    // oscillates.
    Eigen::VectorXd cur = Eigen::VectorXd::Constant(n, 1.0 / n);
    Eigen::VectorXd cesaro = Eigen::VectorXd::Zero(n);
    const int max_steps = std::min(1000, 20 * n + 100);
    for (int k = 1; k <= max_steps; ++k) {
        cur = p.transpose() * cur;
        cesaro += (cur - cesaro) / static_cast<double>(k);
        if (k % 10 == 0) {
            if (residual(cur) <= target) return cur;
            Eigen::VectorXd avg = cesaro / cesaro.sum();
            if (residual(avg) <= target) return avg;
        }
    }

    // Dense fallback: pi^T (P - I) = 0 with one equation replaced by the
    // normalization sum(pi) = 1.
    Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(b);
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();
    if (residual(pi) > 1e-12)
        throw ConvergenceFailure("stationary solve left residual " +
                                 format_double(residual(pi)));
    return pi;
}

namespace {

double max_tv(const Eigen::MatrixXd& diff) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
        worst = std::max(worst, 0.5 * diff.row(i).lpNorm<1>());
    return worst;
}

} // namespace

double distance_to_equilibrium(const Eigen::MatrixXd& p, int k) {
    if (k < 1) throw SizeMismatch("distance_to_equilibrium needs k >= 1");
    const Eigen::VectorXd pi = stationary(p);
    // Iterate B = P - 1 pi^T rather than P itself: identical in exact
    // arithmetic (pi^T D_k = 0), but B kills the constant-row noise
    // direction (B 1 = 0) that P preserves, so d(k) stays meaningful far
    // below the 1e-16 absolute floor of the plain recursion.
    const Eigen::MatrixXd b =
        p - Eigen::VectorXd::Ones(p.rows()) * pi.transpose();
    Eigen::MatrixXd diff = b;
    for (int s = 1; s < k; ++s) diff = b * diff;
    return max_tv(diff);
}

MixingTrace mixing_trace(const Eigen::MatrixXd& p, int k_max) {
    if (k_max < 1) throw SizeMismatch("mixing_trace needs k_max >= 1");
    MixingTrace trace;
    trace.pi_star = stationary(p);
    trace.aperiodic = chain_period(p) == 1;
    // Same centered-iteration trick as distance_to_equilibrium.
    const Eigen::MatrixXd b =
        p - Eigen::VectorXd::Ones(p.rows()) * trace.pi_star.transpose();
    Eigen::MatrixXd diff = b;
    trace.d.reserve(k_max);
    trace.roots.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) diff = b * diff;
        const double d = max_tv(diff);
        trace.d.push_back(d);
        trace.roots.push_back(d > 0.0 ? std::pow(d, 1.0 / k) : 0.0);
    }
    trace.degenerate_zero = trace.d.back() == 0.0;
    return trace;
}

RateEstimate rate_estimate(const Eigen::MatrixXd& p, int k_max) {
    if (!is_irreducible(p)) throw Reducible("rate_estimate needs an irreducible chain");
    if (chain_period(p) != 1) throw Periodic("rate_estimate needs an aperiodic chain");
    const MixingTrace trace = mixing_trace(p, k_max);
    RateEstimate est;
    est.degenerate_zero = trace.degenerate_zero;
    est.rate = trace.degenerate_zero ? 0.0 : trace.roots.back();
    const int tail = std::min<int>(10, k_max);
    est.trailing_roots.assign(trace.roots.end() - tail, trace.roots.end());
    return est;
}

double collision_probability(const Eigen::MatrixXd& p, int t) {
    check_stochastic(p);
    if (t < 0) throw SizeMismatch("collision_probability needs t >= 0");
    const int n = static_cast<int>(p.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int s = 0; s < t; ++s) v = p.transpose() * v;
    return v.squaredNorm();
}

std::string mixing_trace_to_csv(const MixingTrace& trace) {
    std::ostringstream out;
    out << "k,d,root\n";
    for (size_t k = 0; k < trace.d.size(); ++k)
        out << (k + 1) << ',' << format_double(trace.d[k]) << ','
            << format_double(trace.roots[k]) << '\n';
    return out.str();
}

} // namespace dgs
