#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dgs/transition.hpp"

namespace dgs {

// Full spectrum of a transition matrix, sorted by decreasing modulus with
// deterministic tie-breaks (decreasing real part, then decreasing
// imaginary part). rho / rho_tilde are NaN when the matrix did not come
// from a degree sequence.
struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    double lambda2_mod = 0.0;
    double rho = std::numeric_limits<double>::quiet_NaN();
    double rho_tilde = std::numeric_limits<double>::quiet_NaN();
};

// Dense nonsymmetric eigensolve (real Schur under the hood). Throws
// ConvergenceFailure if the QR iteration does not converge.
SpectrumReport compute_spectrum(const Eigen::MatrixXd& m);
SpectrumReport compute_spectrum(const TransitionMatrix& p);

struct BoundVerdict {
    double lambda2_mod = 0.0;
    double threshold = 0.0; // rho_tilde + epsilon
    double margin = 0.0;    // threshold - lambda2_mod
    bool satisfied = false;
};

// |lambda_2| <= rho_tilde + epsilon. Requires a report built from a
// TransitionMatrix (rho_tilde present).
BoundVerdict check_main_bound(const SpectrumReport& report, double epsilon);

// Digraph analogue of the Ramanujan property for the walk matrix A/d:
// every eigenvalue has modulus >= 1 - 1e-8 (trivial) or <= 1/sqrt(d) + 1e-8.
bool is_ramanujan_digraph(const SpectrumReport& report, int d);

// CSV rows `re,im,modulus` in sorted order, shortest round-trip doubles.
std::string spectrum_to_csv(const SpectrumReport& report);
void save_spectrum_csv(const SpectrumReport& report, const std::string& path);

// Self-contained scatter of the spectrum in [-1.1, 1.1]^2 with the unit
// circle, a red circle of radius rho and a green circle of radius 1/delta.
std::string spectrum_to_svg(const SpectrumReport& report, double rho_radius,
                            double delta_inverse_radius);
void save_spectrum_svg(const SpectrumReport& report, double rho_radius,
                       double delta_inverse_radius, const std::string& path);

} // namespace dgs
