#include "dgs/path_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "dgs/errors.hpp"

namespace dgs {

namespace {

enum class StepMode { realized, bridge, centered };

// Shared depth-first enumerator over potential paths. Step weights follow
// `modes`; `max_distinct` bounds the number of distinct vertices a branch
// may touch (tangled paths of length t fit in t-1 vertices, so the
// tangle-targeted runs prune everything wider); `work` counts examined
// couples against the cap.
struct Enumerator {
    const Digraph& g;
    int t;
    const std::vector<StepMode>& modes;
    int max_distinct;
    long long cap;
    Eigen::MatrixXd& out;
    // tangled_rest bookkeeping; ell == 0 means "not a rest run".
    int ell = 0;
    // leaf filters
    bool require_tangled = false;
    bool require_tangle_free = false;

    long long work = 0;
    double inv_m;
    std::vector<int> heads;  // global head index per step
    std::vector<int> tails;  // global tail index per step
    std::vector<int> vseq;   // v_0 .. v_depth
    std::vector<int> distinct;

    Enumerator(const Digraph& g_, int t_, const std::vector<StepMode>& modes_,
               int max_distinct_, long long cap_, Eigen::MatrixXd& out_)
        : g(g_), t(t_), modes(modes_), max_distinct(max_distinct_), cap(cap_),
          out(out_) {
        inv_m = 1.0 / static_cast<double>(g.m());
        heads.resize(t);
        tails.resize(t);
        vseq.resize(t + 1);
    }

    void run() {
        for (int v = 0; v < g.n(); ++v) {
            vseq[0] = v;
            distinct.assign(1, v);
            if (static_cast<int>(distinct.size()) > max_distinct) continue;
            descend(0, 1.0);
        }
    }

    // Cycle-space test of the couple graph restricted to steps [s0, s1).
    bool slice_tangle_free(int s0, int s1) const {
        if (s0 >= s1) return true;
        // distinct couples
        std::vector<std::pair<int, int>> couples;
        couples.reserve(s1 - s0);
        for (int s = s0; s < s1; ++s) couples.emplace_back(heads[s], tails[s]);
        std::sort(couples.begin(), couples.end());
        couples.erase(std::unique(couples.begin(), couples.end()), couples.end());
        // vertex set of the slice
        std::vector<int> verts;
        verts.reserve(2 * (s1 - s0));
        for (int s = s0; s < s1; ++s) {
            verts.push_back(g.head_vertex[heads[s]]);
            verts.push_back(g.tail_vertex[tails[s]]);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        // union-find over the slice vertices
        int parent[64];
        const int nv = static_cast<int>(verts.size());
        for (int i = 0; i < nv; ++i) parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto local = [&](int v) {
            return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) -
                                    verts.begin());
        };
        int comps = nv;
        for (const auto& [h, f] : couples) {
            const int a = find(local(g.head_vertex[h]));
            const int b = find(local(g.tail_vertex[f]));
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
        const int cycles = static_cast<int>(couples.size()) - nv + comps;
        return cycles <= 1;
    }

    bool leaf_accepts() {
        if (require_tangle_free) return slice_tangle_free(0, t);
        if (!require_tangled) return true;
        if (slice_tangle_free(0, t)) return false; // need a tangled path
        if (ell > 0) {
            // prefix tangle-freeness was enforced on the way down; the
            // suffix after the bridge must be tangle-free as well
            return slice_tangle_free(ell, t);
        }
        return true;
    }

    void emit(double weight) {
        if (weight != 0.0 && leaf_accepts()) out(vseq[0], vseq[t]) += weight;
    }

    void step_into(int depth, int h, int f, double weight) {
        const int v = g.tail_vertex[f];
        bool added = false;
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
            if (static_cast<int>(distinct.size()) >= max_distinct) return;
            distinct.push_back(v);
            added = true;
        }
        heads[depth] = h;
        tails[depth] = f;
        vseq[depth + 1] = v;
        // a tangled prefix can never become a tangle-free one
        if (ell > 0 && depth + 1 == ell - 1 && !slice_tangle_free(0, ell - 1)) {
            if (added) distinct.pop_back();
            return;
        }
        if (depth + 1 == t)
            emit(weight);
        else
            descend(depth + 1, weight);
        if (added) distinct.pop_back();
    }

    void charge(long long items) {
        work += items;
        if (work > cap)
            throw TooLarge("path enumeration exceeded the cap of " +
                           std::to_string(cap) + " items");
    }

    void descend(int depth, double weight) {
        const int u = vseq[depth];
        const StepMode mode = modes[depth];
        for (int h = g.head_offset[u]; h < g.head_offset[u + 1]; ++h) {
            const double du = static_cast<double>(g.seq.d_plus[u]);
            if (mode == StepMode::realized) {
                charge(1);
                step_into(depth, h, g.env.sigma[h], weight / du);
                continue;
            }
            const bool saturated = static_cast<int>(distinct.size()) >= max_distinct;
            auto scan_vertex = [&](int v) {
                for (int f = g.tail_offset[v]; f < g.tail_offset[v + 1]; ++f) {
                    charge(1);
                    double w;
                    if (mode == StepMode::bridge)
                        w = 1.0 / du;
                    else
                        w = ((g.env.sigma[h] == f ? 1.0 : 0.0) - inv_m) / du;
                    step_into(depth, h, f, weight * w);
                }
            };
            if (saturated)
                for (int v : distinct) scan_vertex(v);
            else
                for (int v = 0; v < g.n(); ++v) scan_vertex(v);
        }
    }
};

void check_t(int t) {
    if (t < 1) throw SizeMismatch("path length t must be >= 1");
    if (t > 30) throw TooLarge("path length t is unreasonably large");
}

void check_enumeration_size(const Digraph& g, int t, const EnumLimits& limits) {
    const double estimate = static_cast<double>(g.n()) *
                            std::pow(static_cast<double>(g.seq.max_degree), 2.0 * t);
    if (estimate > static_cast<double>(limits.cap))
        throw TooLarge("n * Delta^(2t) = " + std::to_string(estimate) +
                       " exceeds the enumeration cap of " + std::to_string(limits.cap));
}

Eigen::MatrixXd run_enumerator(const Digraph& g, int t, const std::vector<StepMode>& modes,
                               int max_distinct, const EnumLimits& limits, int ell,
                               bool require_tangled, bool require_tangle_free) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.n(), g.n());
    Enumerator e(g, t, modes, max_distinct, limits.cap, out);
    e.ell = ell;
    e.require_tangled = require_tangled;
    e.require_tangle_free = require_tangle_free;
    e.run();
    return out;
}

// Sum of centered products over tangled paths only (the correction the cut
// variant subtracts from the transfer result).
Eigen::MatrixXd tangled_centered_sum(const Digraph& g, int t, const EnumLimits& limits) {
    const std::vector<StepMode> modes(t, StepMode::centered);
    return run_enumerator(g, t, modes, t - 1, limits, 0, /*tangled=*/true,
                          /*tangle_free=*/false);
}

Eigen::MatrixXd tangled_rest_matrix(const Digraph& g, int t, int ell,
                                    const EnumLimits& limits) {
    std::vector<StepMode> modes(t, StepMode::centered);
    for (int s = 0; s < ell - 1; ++s) modes[s] = StepMode::realized;
    modes[ell - 1] = StepMode::bridge;
    return run_enumerator(g, t, modes, t - 1, limits, ell, /*tangled=*/true,
                          /*tangle_free=*/false);
}

} // namespace

Eigen::MatrixXd centered_power_transfer(const Digraph& g, int t) {
    check_t(t);
    const int n = g.n(), m = g.m();
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<int> sigma_inv(m);
    for (int h = 0; h < m; ++h) sigma_inv[g.env.sigma[h]] = h;

    // cur = U * Bbar, indexed (vertex, tail)
    Eigen::MatrixXd cur(n, m);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < m; ++f) {
            const int hv = g.head_vertex[sigma_inv[f]];
            cur(i, f) = (hv == i ? 1.0 / g.seq.d_plus[i] : 0.0) - inv_m;
        }

    if (t > 1) {
        // W = T * Bbar, indexed (tail, tail)
        Eigen::MatrixXd w(m, m);
        for (int f = 0; f < m; ++f) {
            const int vf = g.tail_vertex[f];
            const double dv = static_cast<double>(g.seq.d_plus[vf]);
            for (int f2 = 0; f2 < m; ++f2)
                w(f, f2) = (g.head_vertex[sigma_inv[f2]] == vf ? 1.0 / dv : 0.0) - inv_m;
        }
        for (int s = 2; s <= t; ++s) cur = cur * w;
    }

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int f = 0; f < m; ++f) out.col(g.tail_vertex[f]) += cur.col(f);
    return out;
}

Eigen::MatrixXd variant_matrix(const Digraph& g, VariantTag tag, int t, int ell,
                               const EnumLimits& limits) {
    check_t(t);
    if (tag != VariantTag::tangled_rest && ell != 0)
        throw BadEll("ell is only meaningful for the tangled_rest variant");

    switch (tag) {
    case VariantTag::plain: {
        const std::vector<StepMode> modes(t, StepMode::realized);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, false);
    }
    case VariantTag::centered:
        return centered_power_transfer(g, t);
    case VariantTag::tangle_free: {
        const std::vector<StepMode> modes(t, StepMode::realized);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, true);
    }
    case VariantTag::centered_tangle_free:
        return centered_power_transfer(g, t) - tangled_centered_sum(g, t, limits);
    case VariantTag::tangled_rest:
        if (ell < 1 || ell > t)
            throw BadEll("ell = " + std::to_string(ell) + " outside 1.." +
                         std::to_string(t));
        return tangled_rest_matrix(g, t, ell, limits);
    }
    throw Error("unreachable variant tag");
}

Eigen::MatrixXd variant_matrix_enumerated(const Digraph& g, VariantTag tag, int t,
                                          int ell, const EnumLimits& limits) {
    check_t(t);
    check_enumeration_size(g, t, limits);
    if (tag != VariantTag::tangled_rest && ell != 0)
        throw BadEll("ell is only meaningful for the tangled_rest variant");

    switch (tag) {
    case VariantTag::plain: {
        const std::vector<StepMode> modes(t, StepMode::realized);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, false);
    }
    case VariantTag::centered: {
        const std::vector<StepMode> modes(t, StepMode::centered);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, false);
    }
    case VariantTag::tangle_free: {
        const std::vector<StepMode> modes(t, StepMode::realized);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, true);
    }
    case VariantTag::centered_tangle_free: {
        const std::vector<StepMode> modes(t, StepMode::centered);
        return run_enumerator(g, t, modes, t + 1, limits, 0, false, true);
    }
    case VariantTag::tangled_rest: {
        if (ell < 1 || ell > t)
            throw BadEll("ell = " + std::to_string(ell) + " outside 1.." +
                         std::to_string(t));
        std::vector<StepMode> modes(t, StepMode::centered);
        for (int s = 0; s < ell - 1; ++s) modes[s] = StepMode::realized;
        modes[ell - 1] = StepMode::bridge;
        return run_enumerator(g, t, modes, t + 1, limits, ell, true, false);
    }
    }
    throw Error("unreachable variant tag");
}

double decomposition_residual(const Digraph& g, int t, const EnumLimits& limits) {
    check_t(t);
    const TangleWitness tw = is_d_tangle_free(g, t);
    if (!tw.tangle_free)
        throw NotTangleFree("graph is not " + std::to_string(t) +
                            "-tangle-free: ball at vertex " +
                            std::to_string(tw.witness) + " is tangled");

    const int n = g.n();
    const Eigen::MatrixXd p = build_P(g).probs;
    const Eigen::MatrixXd glue =
        Eigen::VectorXd::Ones(n) * pi_minus(g.seq).transpose(); // 1 pi^T

    // cut centered powers Pbar^((s)), s = 0..t
    std::vector<Eigen::MatrixXd> pbar_cut(t + 1);
    pbar_cut[0] = Eigen::MatrixXd::Identity(n, n);
    for (int s = 1; s <= t; ++s)
        pbar_cut[s] = variant_matrix(g, VariantTag::centered_tangle_free, s, 0, limits);

    Eigen::MatrixXd rhs = pbar_cut[t];
    Eigen::MatrixXd p_power = Eigen::MatrixXd::Identity(n, n); // P^(l-1)
    for (int ell = 1; ell <= t; ++ell) {
        rhs += p_power * glue * pbar_cut[t - ell];
        const Eigen::MatrixXd rest =
            variant_matrix(g, VariantTag::tangled_rest, t, ell, limits);
        rhs -= rest / static_cast<double>(g.m());
        p_power = p_power * p;
    }

    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < t; ++s) lhs = lhs * p;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

void enumerate_paths(const Digraph& g, int i, int j, int t, bool realized_only,
                     const std::function<void(const Path&)>& fn,
                     const EnumLimits& limits) {
    check_t(t);
    if (i < 0 || i >= g.n() || j < 0 || j >= g.n())
        throw SizeMismatch("path endpoints out of range");
    if (!realized_only) check_enumeration_size(g, t, limits);

    // Local re-walk mirroring the matrix enumerator, but materializing Path
    // values; kept simple since this is the streaming API for small cases.
    std::vector<std::pair<HalfEdge, HalfEdge>> steps(t);
    long long work = 0;
    auto rec = [&](auto&& self, int depth, int u) -> void {
        for (int h = g.head_offset[u]; h < g.head_offset[u + 1]; ++h) {
            const HalfEdge head = head_of_index(g.seq, h);
            const int f_lo = realized_only ? g.env.sigma[h] : 0;
            const int f_hi = realized_only ? g.env.sigma[h] + 1 : g.m();
            for (int f = f_lo; f < f_hi; ++f) {
                if (++work > limits.cap)
                    throw TooLarge("path enumeration exceeded the cap of " +
                                   std::to_string(limits.cap) + " items");
                steps[depth] = {head, tail_of_index(g.seq, f)};
                const int v = g.tail_vertex[f];
                if (depth + 1 == t) {
                    if (v == j) {
                        Path p;
                        p.steps = steps;
                        fn(p);
                    }
                } else {
                    self(self, depth + 1, v);
                }
            }
        }
    };
    rec(rec, 0, i);
}

double operator_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    if (svd.info() != Eigen::Success)
        throw ConvergenceFailure("SVD did not converge while computing an operator norm");
    return svd.singularValues()(0);
}

NormBoundReport norm_vs_bound_report(const Digraph& g, int t, double c,
                                     const std::vector<int>& D_values,
                                     const EnumLimits& limits) {
    check_t(t);
    NormBoundReport report;
    report.n = g.n();
    report.t = t;
    report.c = c;
    report.rho_tilde = rho_tilde(g.seq);
    report.D_values = D_values;

    const double log_n = std::log(static_cast<double>(g.n()));
    const double scale = c * report.rho_tilde;

    const Eigen::MatrixXd pbar_cut =
        variant_matrix(g, VariantTag::centered_tangle_free, t, 0, limits);
    report.centered_cut_norm = operator_norm(pbar_cut);
    report.centered_cut_root = std::pow(report.centered_cut_norm, 1.0 / t);
    for (int d : D_values)
        report.centered_bounds.push_back(std::pow(log_n, d) * std::pow(scale, t));

    for (int ell = 1; ell <= t; ++ell) {
        const Eigen::MatrixXd rest =
            variant_matrix(g, VariantTag::tangled_rest, t, ell, limits);
        report.rest_norms.push_back(operator_norm(rest));
        std::vector<double> bounds;
        for (int d : D_values)
            bounds.push_back(static_cast<double>(g.n()) * std::pow(log_n, d) *
                             std::pow(scale, t + ell));
        report.rest_bounds.push_back(std::move(bounds));
    }
    return report;
}

} // namespace dgs
