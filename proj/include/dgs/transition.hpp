#pragma once

#include <Eigen/Dense>
#include <string>

#include "dgs/config_sampler.hpp"

namespace dgs {

// Row-stochastic random-walk matrix of a realized digraph:
// P(u,v) = #{heads of u matched into tails of v} / d_plus[u].
// Carries its source graph so downstream reports can reach the degree data.
struct TransitionMatrix {
    Eigen::MatrixXd probs;
    Digraph graph;

    int n() const { return static_cast<int>(probs.rows()); }
};

TransitionMatrix build_P(const Digraph& g);

// In-degree profile pi_minus(j) = d_minus[j] / M; this is both the expected
// row of P under a uniform environment and the rank-one direction the
// spectral argument removes.
Eigen::VectorXd pi_minus(const DegreeSequence& seq);

// Weight of the (head e, tail f) couple: 1{sigma(e)=f} / d_plus[e's vertex],
// or its centered version (1{sigma(e)=f} - 1/M) / d_plus[e's vertex].
// Throws KindMismatch if e is not a head or f is not a tail.
double edge_weight(const Digraph& g, const HalfEdge& e, const HalfEdge& f,
                   bool centered);

// Dense matrix CSV (comma-separated rows, shortest round-trip doubles).
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(const std::string& text);
void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

} // namespace dgs
