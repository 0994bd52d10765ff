#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dgs/path.hpp"
#include "dgs/tangle.hpp"
#include "dgs/transition.hpp"

namespace dgs {

// Path-sum matrices over potential paths of length t. Weights per step:
// uncentered A(e,f) = 1{sigma(e)=f}/d_plus, centered
// Abar(e,f) = (1{sigma(e)=f} - 1/M)/d_plus.
//   plain                 sum of A-products over all potential paths (= P^t)
//   centered              sum of Abar-products (uncut)
//   tangle_free           A-products over tangle-free paths only
//   centered_tangle_free  Abar-products over tangle-free paths only
//   tangled_rest          the (t,ell) remainder: tangled paths that split as
//                         tangle-free prefix of length ell-1, bridge couple,
//                         tangle-free suffix; weight
//                         prod_{s<ell} A * (1/d_plus at the bridge) * prod_{s>ell} Abar
enum class VariantTag { plain, centered, tangle_free, centered_tangle_free, tangled_rest };

struct EnumLimits {
    // Cap on enumeration items. Pre-checked against the n * Delta^(2t)
    // size estimate and enforced again by a live work counter, so a branchy
    // enumeration cannot run away even when the estimate is optimistic.
    long long cap = 10'000'000;
};

// Primary computation routes: `centered` goes through the half-edge
// transfer product U Bbar (T Bbar)^{t-1} V; tangle-filtered variants
// enumerate only the region where tangles can live (a tangled path of
// length t spans at most t-1 distinct vertices) and combine with the
// transfer result. ell is only read for tangled_rest (throws BadEll when
// outside 1..t).
Eigen::MatrixXd variant_matrix(const Digraph& g, VariantTag tag, int t, int ell = 0,
                               const EnumLimits& limits = {});

// Definitional full-enumeration route for every tag; used to cross-check
// the fast routes. Throws TooLarge per EnumLimits.
Eigen::MatrixXd variant_matrix_enumerated(const Digraph& g, VariantTag tag, int t,
                                          int ell = 0, const EnumLimits& limits = {});

// The centered uncut power via the transfer product alone (t >= 1).
Eigen::MatrixXd centered_power_transfer(const Digraph& g, int t);

// Max entrywise absolute defect of the exact decomposition
//   P^t = Pbar^(t) + sum_{l=1..t} P^{l-1} 1 pi_minus^T Pbar^((t-l))
//         - (1/M) sum_{l=1..t} R^{t,l}
// on a t-tangle-free graph (checked; throws NotTangleFree with the witness
// vertex). All cut quantities use the tangle-filtered variants.
double decomposition_residual(const Digraph& g, int t, const EnumLimits& limits = {});

// Streams potential (or realized) paths from vertex i to vertex j.
void enumerate_paths(const Digraph& g, int i, int j, int t, bool realized_only,
                     const std::function<void(const Path&)>& fn,
                     const EnumLimits& limits = {});

// Largest singular value. Throws ConvergenceFailure if the SVD fails.
double operator_norm(const Eigen::MatrixXd& m);

// Measured norms of the cut matrices against the bound shapes
// ln(n)^D (c rho_tilde)^t and n ln(n)^D (c rho_tilde)^(t+ell) for a
// user-chosen c > 1 and a list of D exponents. Informational: the record
// reports, callers decide what to assert.
struct NormBoundReport {
    int n = 0;
    int t = 0;
    double c = 0.0;
    double rho_tilde = 0.0;
    std::vector<int> D_values;
    double centered_cut_norm = 0.0;            // ||Pbar^((t))||
    double centered_cut_root = 0.0;            // norm^(1/t)
    std::vector<double> centered_bounds;       // per D
    std::vector<double> rest_norms;            // ||R^{t,ell}||, ell = 1..t
    std::vector<std::vector<double>> rest_bounds; // [ell-1][D index]
};

NormBoundReport norm_vs_bound_report(const Digraph& g, int t, double c,
                                     const std::vector<int>& D_values,
                                     const EnumLimits& limits = {});

} // namespace dgs
